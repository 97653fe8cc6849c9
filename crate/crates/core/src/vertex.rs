//! Local operators: R-matrices, L-operators, K-matrices and their relations.
//!
//! Basis of a two-factor space: `|00>, |01>, |10>, |11>` with the first
//! (auxiliary) factor most significant. Rows index outputs, columns inputs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{sample_param_point, Kind, ParamPoint, Scalar};

/// A 4×4 operator on `W ⊗ W` (or `W_a ⊗ V_j`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat4(pub [[Scalar; 4]; 4]);

/// A 2×2 operator on the auxiliary space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat2(pub [[Scalar; 2]; 2]);

/// The entries allowed to be nonzero in a free-fermionic six-vertex operator.
pub const SIX_VERTEX_SUPPORT: [(usize, usize); 6] = [(0, 0), (1, 1), (1, 2), (2, 1), (2, 2), (3, 3)];

impl Mat4 {
    pub fn zero() -> Self {
        Mat4(std::array::from_fn(|_| std::array::from_fn(|_| Scalar::zero())))
    }

    /// Build from the six free-fermionic weights
    /// `(1,1), (2,2), (2,3), (3,2), (3,3), (4,4)`.
    pub fn six_vertex(a1: Scalar, b1: Scalar, c1: Scalar, c2: Scalar, b2: Scalar, a2: Scalar) -> Self {
        let mut m = Mat4::zero();
        m.0[0][0] = a1;
        m.0[1][1] = b1;
        m.0[1][2] = c1;
        m.0[2][1] = c2;
        m.0[2][2] = b2;
        m.0[3][3] = a2;
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        Mat4(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn from_ints(rows: [[i64; 4]; 4]) -> Self {
        Mat4::from_fn(|i, j| Scalar::from(rows[i][j]))
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(4, 4, |i, j| self.0[i][j].clone())
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        assert_eq!((m.rows(), m.cols()), (4, 4));
        Mat4::from_fn(|i, j| m[(i, j)].clone())
    }

    pub fn mul(&self, other: &Mat4) -> Mat4 {
        Mat4::from_fn(|i, j| (0..4).map(|k| &self.0[i][k] * &other.0[k][j]).sum())
    }

    pub fn transpose(&self) -> Mat4 {
        Mat4::from_fn(|i, j| self.0[j][i].clone())
    }

    /// `P M P` with `P` the flip of the two tensor factors.
    pub fn flip(&self) -> Mat4 {
        const P: [usize; 4] = [0, 2, 1, 3];
        Mat4::from_fn(|i, j| self.0[P[i]][P[j]].clone())
    }

    /// Transpose in the first tensor factor only.
    pub fn partial_transpose_first(&self) -> Mat4 {
        Mat4::from_fn(|i, j| {
            let (ao, qo, ai, qi) = (i >> 1, i & 1, j >> 1, j & 1);
            self.0[2 * ai + qo][2 * ao + qi].clone()
        })
    }

    /// Transpose in the second tensor factor only.
    pub fn partial_transpose_second(&self) -> Mat4 {
        Mat4::from_fn(|i, j| {
            let (ao, qo, ai, qi) = (i >> 1, i & 1, j >> 1, j & 1);
            self.0[2 * ao + qi][2 * ai + qo].clone()
        })
    }

    /// True iff every entry outside [`SIX_VERTEX_SUPPORT`] is zero.
    pub fn has_six_vertex_support(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| SIX_VERTEX_SUPPORT.contains(&(i, j)) || self.0[i][j].is_zero()))
    }

    /// `a₁a₂ + b₁b₂ = c₁c₂` with `a` the (1,1),(4,4), `b` the (2,2),(3,3)
    /// and `c` the (2,3),(3,2) entries.
    pub fn satisfies_free_fermion(&self) -> bool {
        let m = &self.0;
        &m[0][0] * &m[3][3] + &m[1][1] * &m[2][2] == &m[1][2] * &m[2][1]
    }
}

impl Mat2 {
    pub fn diag(a: Scalar, b: Scalar) -> Self {
        Mat2([[a, Scalar::zero()], [Scalar::zero(), b]])
    }

    pub fn is_diagonal(&self) -> bool {
        self.0[0][1].is_zero() && self.0[1][0].is_zero()
    }

    /// `K ⊗ I` on a two-factor space.
    pub fn on_first(&self) -> Mat4 {
        Mat4::from_fn(|i, j| if (i & 1) == (j & 1) { self.0[i >> 1][j >> 1].clone() } else { Scalar::zero() })
    }

    /// `I ⊗ K` on a two-factor space.
    pub fn on_second(&self) -> Mat4 {
        Mat4::from_fn(|i, j| if (i >> 1) == (j >> 1) { self.0[i & 1][j & 1].clone() } else { Scalar::zero() })
    }
}

/// The general free-fermionic R-matrix `R(z, p, q)`.
pub fn r_general(z: &Scalar, p: &Scalar, q: &Scalar) -> Result<Mat4> {
    if p.is_zero() {
        return precondition("r_general requires p != 0");
    }
    let q_over_p = q.checked_div(p)?;
    Ok(Mat4::six_vertex(
        1 - p * q * z,
        -p.square() * (1 - &q_over_p * z),
        1 - q.square(),
        (1 - p.square()) * z,
        z - &q_over_p,
        z - p * q,
    ))
}

/// The R-matrix `R(z, t)` intertwining two type Γ L-operators.
pub fn r_t(z: &Scalar, t: &Scalar) -> Mat4 {
    Mat4::six_vertex(1 + t * z, t * (1 - z), t + 1, (t + 1) * z, z - 1, z + t)
}

/// The type Γ L-operator.
pub fn l_gamma(z: &Scalar, t: &Scalar, alpha: &Scalar, gamma: &Scalar) -> Mat4 {
    let s = 1 - alpha * gamma;
    Mat4::six_vertex(
        1 - gamma * z,
        t + gamma * z,
        Scalar::one(),
        (t + 1) * z,
        alpha + &s * z,
        -(t * alpha) + &s * z,
    )
}

/// The type Δ L-operator.
pub fn l_delta(z: &Scalar, t: &Scalar, alpha: &Scalar, gamma: &Scalar) -> Mat4 {
    let s = 1 - alpha * gamma;
    Mat4::six_vertex(
        alpha + &s * z,
        t * &s * z - alpha,
        Scalar::one(),
        (t + 1) * z,
        1 - gamma * z,
        t * gamma * z + 1,
    )
}

/// The type I boundary K-matrix.
pub fn k_type1(z: &Scalar, t: &Scalar, alpha0: &Scalar, gamma0: &Scalar) -> Result<Mat2> {
    let zinv = z.inv()?;
    let s = 1 - alpha0 * gamma0;
    Ok(Mat2::diag(&s * t * z - alpha0, &s * &zinv + alpha0))
}

/// The type II boundary K-matrix at `z = w²`, `√(-t) = u`.
pub fn k_type2(w: &Scalar, u: &Scalar) -> Result<Mat2> {
    let winv = w.inv()?;
    Ok(Mat2::diag(-(u * w), winv))
}

/// Embed an operator on factors `(a, b)` of an `n`-fold tensor power of `C²`.
///
/// Factor 0 is the most significant bit of the basis index. `a` is the
/// operator's first slot, so `embed(m, 1, 0, 2)` is `P m P`.
pub fn embed(m: &Mat4, a: usize, b: usize, n: usize) -> Matrix {
    assert!(a != b && a < n && b < n);
    let dim = 1usize << n;
    let bit = |f: usize| n - 1 - f;
    let mut out = Matrix::zeros(dim, dim);
    for col in 0..dim {
        let ia = (col >> bit(a)) & 1;
        let ib = (col >> bit(b)) & 1;
        let rest = col & !(1 << bit(a)) & !(1 << bit(b));
        for oa in 0..2 {
            for ob in 0..2 {
                let w = &m.0[2 * oa + ob][2 * ia + ib];
                if w.is_zero() {
                    continue;
                }
                let row = rest | (oa << bit(a)) | (ob << bit(b));
                out[(row, col)] = w.clone();
            }
        }
    }
    out
}

fn products_equal(lhs: &[Matrix], rhs: &[Matrix]) -> bool {
    let prod = |ms: &[Matrix]| ms[1..].iter().fold(ms[0].clone(), |acc, m| acc.mul(m));
    prod(lhs) == prod(rhs)
}

/// `R₁₂(z₁/z₂; p₁, p₁) R₁₃(z₁; p₁, p₂) R₂₃(z₂; p₁, p₂)` against the reversed product.
pub fn check_yang_baxter_general(z1: &Scalar, z2: &Scalar, p1: &Scalar, p2: &Scalar) -> Result<bool> {
    if z2.is_zero() {
        return precondition("check_yang_baxter_general requires z2 != 0");
    }
    let r12 = embed(&r_general(&z1.checked_div(z2)?, p1, p1)?, 0, 1, 3);
    let r13 = embed(&r_general(z1, p1, p2)?, 0, 2, 3);
    let r23 = embed(&r_general(z2, p1, p2)?, 1, 2, 3);
    Ok(products_equal(&[r12.clone(), r13.clone(), r23.clone()], &[r23, r13, r12]))
}

/// Whether `R_ab L_aj L_bj = L_bj L_aj R_ab` on `W_a ⊗ W_b ⊗ V_j`.
pub fn intertwines(r: &Mat4, la: &Mat4, lb: &Mat4) -> bool {
    let r = embed(r, 0, 1, 3);
    let la = embed(la, 0, 2, 3);
    let lb = embed(lb, 1, 2, 3);
    products_equal(&[r.clone(), la.clone(), lb.clone()], &[lb, la, r])
}

/// The RLL relation for the type Γ L-operator with `R(z₁/z₂, t)`.
pub fn check_rll(z1: &Scalar, z2: &Scalar, t: &Scalar, alpha: &Scalar, gamma: &Scalar) -> Result<bool> {
    if z2.is_zero() {
        return precondition("check_rll requires z2 != 0");
    }
    let r = r_t(&z1.checked_div(z2)?, t);
    Ok(intertwines(&r, &l_gamma(z1, t, alpha, gamma), &l_gamma(z2, t, alpha, gamma)))
}

/// The scalar identity behind the RLL relation:
/// `t zᵢ + z_k = (1-γzᵢ)(-tα+(1-αγ)z_k) + (α+(1-αγ)zᵢ)(t+γz_k)`.
pub fn rll_scalar_relation(zi: &Scalar, zk: &Scalar, t: &Scalar, alpha: &Scalar, gamma: &Scalar) -> bool {
    let s = 1 - alpha * gamma;
    let lhs = t * zi + zk;
    let rhs = (1 - gamma * zi) * (-(t * alpha) + &s * zk) + (alpha + &s * zi) * (t + gamma * zk);
    lhs == rhs
}

/// Intertwiner of two auxiliary-transposed type Γ operators:
/// `R̄(y/x)` relates `Γᵗ(x)` and `Γᵗ(y)`.
pub fn r_bar(q: &Scalar, t: &Scalar) -> Mat4 {
    Mat4::six_vertex(1 + t * q, q - 1, t + 1, (t + 1) * q, t * (1 - q), t + q)
}

/// The mixed Γ/Δ R-matrix entering the reflection relation.
///
/// Its second-factor partial transpose of `r_mix(y/x)ᵀ` intertwines `Γ(x)`
/// and `Δ` transposed in the auxiliary space at `y`.
pub fn r_mix(p: &Scalar, t: &Scalar) -> Mat4 {
    Mat4::six_vertex(t.square() * p - 1, t * p + 1, t + 1, (t + 1) * p, t * p + 1, 1 - p)
}

/// Variant of the reflection relation
/// `S₁(q) K₁(z₁) S₂(p) K₂(z₂) = K₂(z₂) S₃(p) K₁(z₁) S₄(q)`
/// with `q = z₁/z₂`, `p = z₁z₂`, `S₁ = R(q,t)`, `S₂ = r_mix(p)`,
/// `S₃ = r_mix(p)ᵀ`, `S₄ = r_bar(q)`. Each slot may be conjugated by the
/// factor flip and either argument may be inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReflectionConvention {
    pub flip: [bool; 4],
    pub invert_q: bool,
    pub invert_p: bool,
}

/// The calibrated convention; `calibrate_reflection` must return exactly this.
pub const REFLECTION_CONVENTION: ReflectionConvention =
    ReflectionConvention { flip: [true, false, false, false], invert_q: false, invert_p: false };

impl ReflectionConvention {
    /// All 64 variants, in a fixed order.
    pub fn all() -> Vec<ReflectionConvention> {
        (0..64u32)
            .map(|b| ReflectionConvention {
                flip: [b & 1 != 0, b & 2 != 0, b & 4 != 0, b & 8 != 0],
                invert_q: b & 16 != 0,
                invert_p: b & 32 != 0,
            })
            .collect()
    }
}

fn boundary(kind: Kind, point: &ParamPoint, x: &Scalar) -> Result<(Scalar, Mat2)> {
    match kind {
        Kind::I => Ok((x.clone(), k_type1(x, &point.t, &point.alpha[0], &point.gamma[0])?)),
        Kind::II => Ok((x.square(), k_type2(x, point.u()?)?)),
    }
}

/// Evaluate one variant of the reflection relation at `(x₁, x₂)`: spectral
/// `z` for type I, `w` for type II.
pub fn reflection_holds(
    conv: &ReflectionConvention,
    kind: Kind,
    point: &ParamPoint,
    x1: &Scalar,
    x2: &Scalar,
) -> Result<bool> {
    if x1.is_zero() || x2.is_zero() {
        return precondition("reflection relation requires nonzero spectral arguments");
    }
    let t = match kind {
        Kind::I => point.t.clone(),
        Kind::II => -point.u()?.square(),
    };
    let (z1, k_1) = boundary(kind, point, x1)?;
    let (z2, k_2) = boundary(kind, point, x2)?;
    let mut q = z1.checked_div(&z2)?;
    let mut p = &z1 * &z2;
    if conv.invert_q {
        q = q.inv()?;
    }
    if conv.invert_p {
        p = p.inv()?;
    }
    let slot = |i: usize, m: Mat4| if conv.flip[i] { m.flip() } else { m };
    let s1 = slot(0, r_t(&q, &t));
    let s2 = slot(1, r_mix(&p, &t));
    let s3 = slot(2, r_mix(&p, &t).transpose());
    let s4 = slot(3, r_bar(&q, &t));
    let (k1, k2) = (k_1.on_first(), k_2.on_second());
    let lhs = s1.mul(&k1).mul(&s2).mul(&k2);
    let rhs = k2.mul(&s3).mul(&k1).mul(&s4);
    Ok(lhs == rhs)
}

/// The reflection relation under the calibrated convention.
pub fn check_reflection(kind: Kind, point: &ParamPoint, x1: &Scalar, x2: &Scalar) -> Result<bool> {
    reflection_holds(&REFLECTION_CONVENTION, kind, point, x1, x2)
}

/// Every convention satisfied at `samples` random points for each of the
/// type I (generic and `α₀ = γ₀ = 0`) and type II K-matrices.
pub fn calibrate_reflection(seed: u64, samples: usize) -> Result<Vec<ReflectionConvention>> {
    let mut cases = Vec::new();
    for i in 0..samples as u64 {
        let p1 = sample_param_point(seed.wrapping_add(i), 1, 2, Kind::I, 30)?;
        let mut p0 = p1.clone();
        p0.alpha[0] = Scalar::zero();
        p0.gamma[0] = Scalar::zero();
        let p2 = sample_param_point(seed.wrapping_add(i), 1, 2, Kind::II, 30)?;
        let w = p2.w.clone().expect("type II sample");
        cases.push((Kind::I, p1.clone(), p1.z[0].clone(), p1.z[1].clone()));
        cases.push((Kind::I, p0.clone(), p0.z[0].clone(), p0.z[1].clone()));
        cases.push((Kind::II, p2, w[0].clone(), w[1].clone()));
    }
    let mut accepted = Vec::new();
    'conv: for conv in ReflectionConvention::all() {
        for (kind, point, x1, x2) in &cases {
            if !reflection_holds(&conv, *kind, point, x1, x2)? {
                continue 'conv;
            }
        }
        accepted.push(conv);
    }
    Ok(accepted)
}

/// Which local operator a [`Mutation`] corrupts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MutationTarget {
    LGamma,
    LDelta,
    KTypeI,
    KTypeII,
}

impl MutationTarget {
    fn name(self) -> &'static str {
        match self {
            MutationTarget::LGamma => "l-gamma",
            MutationTarget::LDelta => "l-delta",
            MutationTarget::KTypeI => "k-type1",
            MutationTarget::KTypeII => "k-type2",
        }
    }

    fn size(self) -> usize {
        match self {
            MutationTarget::LGamma | MutationTarget::LDelta => 4,
            MutationTarget::KTypeI | MutationTarget::KTypeII => 2,
        }
    }
}

/// Add 1 to one entry (0-based `row`, `col`) of a local operator wherever
/// the lattice engine builds it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mutation {
    pub target: MutationTarget,
    pub row: usize,
    pub col: usize,
}

impl Mutation {
    /// Every single-entry mutation of the four operators.
    pub fn all() -> Vec<Mutation> {
        let targets = [MutationTarget::LGamma, MutationTarget::LDelta, MutationTarget::KTypeI, MutationTarget::KTypeII];
        let mut out = Vec::new();
        for target in targets {
            for row in 0..target.size() {
                for col in 0..target.size() {
                    out.push(Mutation { target, row, col });
                }
            }
        }
        out
    }

    pub fn apply_l(&self, target: MutationTarget, m: &mut Mat4) {
        if self.target == target {
            m.0[self.row][self.col] += Scalar::one();
        }
    }

    pub fn apply_k(&self, target: MutationTarget, k: &mut Mat2) {
        if self.target == target {
            k.0[self.row][self.col] += Scalar::one();
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.target.name(), self.row + 1, self.col + 1)
    }
}

impl FromStr for Mutation {
    type Err = Error;

    /// Parses `target:row:col` with 1-based indices, e.g. `l-gamma:2:3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let mut parts = s.split(':');
        let target = match parts.next().ok_or_else(bad)? {
            "l-gamma" => MutationTarget::LGamma,
            "l-delta" => MutationTarget::LDelta,
            "k-type1" => MutationTarget::KTypeI,
            "k-type2" => MutationTarget::KTypeII,
            _ => return Err(bad()),
        };
        let row: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let col: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if parts.next().is_some() || row == 0 || col == 0 || row > target.size() || col > target.size() {
            return Err(bad());
        }
        Ok(Mutation { target, row: row - 1, col: col - 1 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    #[test]
    fn r_general_at_zero() {
        let (p, q) = (s("2"), s("3"));
        let m = r_general(&Scalar::zero(), &p, &q).unwrap();
        let expect = Mat4::six_vertex(s("1"), s("-4"), s("-8"), s("0"), s("-3/2"), s("-6"));
        assert_eq!(m, expect);
        assert!(r_general(&s("1"), &Scalar::zero(), &q).is_err());
    }

    #[test]
    fn r_general_vanishes_at_one() {
        let one = Scalar::one();
        assert_eq!(r_general(&one, &one, &one).unwrap(), Mat4::zero());
    }

    #[test]
    fn r_t_at_one() {
        let t = s("5/3");
        let m = r_t(&Scalar::one(), &t);
        let tp1 = &t + 1;
        assert_eq!(m, Mat4::six_vertex(tp1.clone(), s("0"), tp1.clone(), tp1.clone(), s("0"), tp1));
    }

    #[test]
    fn r_t_at_t_zero() {
        let z = s("7/2");
        let m = r_t(&z, &Scalar::zero());
        assert_eq!(m, Mat4::six_vertex(s("1"), s("0"), s("1"), z.clone(), &z - 1, z));
    }

    #[test]
    fn l_operators_at_z_zero() {
        let (t, a, g) = (s("2"), s("3"), s("5"));
        let zero = Scalar::zero();
        assert_eq!(l_gamma(&zero, &t, &a, &g), Mat4::six_vertex(s("1"), s("2"), s("1"), s("0"), s("3"), s("-6")));
        assert_eq!(l_delta(&zero, &t, &a, &g), Mat4::six_vertex(s("3"), s("-3"), s("1"), s("0"), s("1"), s("1")));
    }

    #[test]
    fn l_delta_trivial_parameters() {
        let (z, t) = (s("3/4"), s("2"));
        let zero = Scalar::zero();
        let m = l_delta(&z, &t, &zero, &zero);
        assert_eq!(m, Mat4::six_vertex(z.clone(), &t * &z, s("1"), (&t + 1) * &z, s("1"), s("1")));
    }

    #[test]
    fn k_matrix_examples() {
        let k = k_type1(&s("2"), &s("3"), &s("1"), &s("1")).unwrap();
        assert_eq!(k, Mat2::diag(s("-1"), s("1")));
        let k = k_type1(&s("5"), &s("3"), &s("0"), &s("0")).unwrap();
        assert_eq!(k, Mat2::diag(s("15"), s("1/5")));
        let (t, a0, g0) = (s("7"), s("2"), s("1/3"));
        let k = k_type1(&Scalar::one(), &t, &a0, &g0).unwrap();
        let sfac = 1 - &a0 * &g0;
        assert_eq!(k, Mat2::diag(&sfac * &t - &a0, &sfac + &a0));
        assert_eq!(k_type2(&s("1"), &s("4")).unwrap(), Mat2::diag(s("-4"), s("1")));
        assert_eq!(k_type2(&s("2"), &s("3")).unwrap(), Mat2::diag(s("-6"), s("1/2")));
        assert!(k_type1(&Scalar::zero(), &t, &a0, &g0).is_err());
        assert!(k_type2(&Scalar::zero(), &t).is_err());
    }

    #[test]
    fn embedding_matches_flip() {
        let m = r_t(&s("2/3"), &s("5"));
        assert_eq!(embed(&m, 1, 0, 2), m.flip().to_matrix());
        assert_eq!(embed(&m, 0, 1, 2), m.to_matrix());
    }

    #[test]
    fn partial_transposes_compose_to_transpose() {
        let m = Mat4::from_fn(|i, j| Scalar::from((4 * i + j) as i64));
        assert_eq!(m.partial_transpose_first().partial_transpose_second(), m.transpose());
        assert_eq!(m.partial_transpose_first().partial_transpose_first(), m);
    }

    #[test]
    fn mutation_names_roundtrip() {
        for m in Mutation::all() {
            assert_eq!(m.to_string().parse::<Mutation>().unwrap(), m);
        }
        assert_eq!(Mutation::all().len(), 40);
        assert!("l-gamma:5:1".parse::<Mutation>().is_err());
        assert!("k-type1:0:1".parse::<Mutation>().is_err());
    }
}
