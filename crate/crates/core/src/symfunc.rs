//! Partitions and the generalized symplectic Schur and Whittaker functions.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Kind, Scalar};

/// A weakly decreasing sequence of non-negative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return precondition("partition parts must be weakly decreasing");
        }
        Ok(Partition(parts))
    }

    pub fn zeros(n: usize) -> Self {
        Partition(vec![0; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `μ = λ + δ` with `δ = (N-1, …, 0)`.
    pub fn shifted(&self) -> Vec<usize> {
        let n = self.0.len();
        self.0.iter().enumerate().map(|(i, l)| l + n - 1 - i).collect()
    }

    /// Every partition with at most `n` parts, each at most `m`.
    pub fn in_box(n: usize, m: usize) -> Vec<Partition> {
        (0..n)
            .map(|_| 0..=m)
            .multi_cartesian_product()
            .filter(|p| p.windows(2).all(|w| w[0] >= w[1]))
            .map(Partition)
            .collect()
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

fn check_positions(positions: &[usize]) -> Result<()> {
    if positions.first().is_some_and(|&x| x < 1) {
        return precondition("positions start at 1");
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return precondition("positions must be strictly increasing");
    }
    Ok(())
}

/// `λ_j = x_{N-j+1} - N + j - 1`.
pub fn positions_to_partition(positions: &[usize]) -> Result<Partition> {
    check_positions(positions)?;
    let n = positions.len();
    Ok(Partition((0..n).map(|i| positions[n - 1 - i] + i - n).collect()))
}

/// `x_i = λ_{N-i+1} + i`.
pub fn partition_to_positions(lambda: &Partition) -> Vec<usize> {
    let n = lambda.len();
    (0..n).map(|i| lambda.0[n - 1 - i] + i + 1).collect()
}

/// The sorted complement of `positions` in `1..=m`.
pub fn complement_positions(positions: &[usize], m: usize) -> Result<Vec<usize>> {
    if positions.iter().any(|&x| x < 1 || x > m) {
        return precondition(format!("positions must lie in 1..={m}"));
    }
    Ok((1..=m).filter(|x| !positions.contains(x)).collect())
}

/// `λ̂_i = #{ j : λ_j ≤ M - i }` for `i = 1..M`.
pub fn hat_partition(lambda: &Partition, m: usize) -> Result<Partition> {
    if lambda.0.first().is_some_and(|&l| l > m) {
        return precondition(format!("partition does not fit in a box of width {m}"));
    }
    Ok(Partition((1..=m).map(|i| lambda.0.iter().filter(|&&l| l + i <= m).count()).collect()))
}

/// Site parameter arrays `α_base, …, α_L` and `γ_base, …, γ_L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymParams {
    pub alpha: Vec<Scalar>,
    pub gamma: Vec<Scalar>,
    pub base: usize,
}

impl SymParams {
    pub fn new(alpha: Vec<Scalar>, gamma: Vec<Scalar>, base: usize) -> Result<Self> {
        if base > 1 {
            return precondition("indexing base must be 0 or 1");
        }
        if alpha.len() != gamma.len() {
            return precondition("alpha and gamma must have equal length");
        }
        Ok(SymParams { alpha, gamma, base })
    }

    /// All-zero parameters with top index `top`.
    pub fn zeros(base: usize, top: usize) -> Self {
        let len = (top + 1).saturating_sub(base);
        SymParams { alpha: vec![Scalar::zero(); len], gamma: vec![Scalar::zero(); len], base }
    }

    /// The top index `L`.
    pub fn top(&self) -> usize {
        (self.base + self.alpha.len()).saturating_sub(1)
    }

    pub fn alpha(&self, j: usize) -> &Scalar {
        &self.alpha[j - self.base]
    }

    pub fn gamma(&self, j: usize) -> &Scalar {
        &self.gamma[j - self.base]
    }

    /// `{-α}`, `{-γ}`.
    pub fn negated(&self) -> SymParams {
        SymParams {
            alpha: self.alpha.iter().map(|a| -a).collect(),
            gamma: self.gamma.iter().map(|g| -g).collect(),
            base: self.base,
        }
    }

    fn check(&self, base: usize, mu: usize) -> Result<()> {
        if self.base != base {
            return precondition(format!("expected parameters indexed from {base}"));
        }
        if self.alpha.is_empty() || mu + 1 > self.top() {
            return precondition(format!("mu = {mu} needs top index at least {}", mu + 1));
        }
        Ok(())
    }

    /// `α_j + (1 - α_jγ_j) z`
    fn brace(&self, j: usize, z: &Scalar) -> Scalar {
        let (a, g) = (self.alpha(j), self.gamma(j));
        a + (1 - a * g) * z
    }

    /// `∏_{j=μ+2}^{L} (1 - γ_j z) · ∏_{j=1}^{L} (1 - γ_j/z)`
    fn tail(&self, mu: usize, z: &Scalar, zinv: &Scalar) -> Scalar {
        let l = self.top();
        let upper: Scalar = (mu + 2..=l).map(|j| 1 - self.gamma(j) * z).product();
        let lower: Scalar = (1..=l).map(|j| 1 - self.gamma(j) * zinv).product();
        upper * lower
    }
}

/// `g_μ(z) = ∏_{j=0}^{μ}{α_j + (1-α_jγ_j)z} ∏_{j=μ+2}^{L}(1-γ_j z) ∏_{j=1}^{L}(1-γ_j z⁻¹)`.
pub fn g_mu(z: &Scalar, params: &SymParams, mu: usize) -> Result<Scalar> {
    params.check(0, mu)?;
    let zinv = z.inv()?;
    let head: Scalar = (0..=mu).map(|j| params.brace(j, z)).product();
    Ok(head * params.tail(mu, z, &zinv))
}

/// Sign choice in `h^±_μ` and `o^±_λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply(self, u: &Scalar) -> Scalar {
        match self {
            Sign::Plus => u.clone(),
            Sign::Minus => -u,
        }
    }
}

/// `h^±_μ(z) = (z ± u) ∏_{j=1}^{μ}{α_j + (1-α_jγ_j)z} ∏_{j=μ+2}^{L}(1-γ_j z) ∏_{j=1}^{L}(1-γ_j z⁻¹)`.
pub fn h_pm_mu(z: &Scalar, u: &Scalar, params: &SymParams, mu: usize, sign: Sign) -> Result<Scalar> {
    params.check(1, mu)?;
    let zinv = z.inv()?;
    let head: Scalar = (1..=mu).map(|j| params.brace(j, z)).product();
    Ok((z + sign.apply(u)) * head * params.tail(mu, z, &zinv))
}

fn check_spectral(zs: &[Scalar]) -> Result<()> {
    if zs.iter().any(Scalar::is_zero) {
        return precondition("spectral parameters must be nonzero");
    }
    Ok(())
}

/// `det(z_k^{N-j+1} - z_k^{-N+j-1})` through its product form
/// `(-1)^N ∏ z_j^{j-1-N}(1-z_j²) ∏_{j<k}(1-z_j z_k)(1-z_j z_k⁻¹)`.
pub fn weyl_denominator(zs: &[Scalar]) -> Result<Scalar> {
    check_spectral(zs)?;
    let n = zs.len() as i64;
    let mut acc = if n % 2 == 0 { Scalar::one() } else { -Scalar::one() };
    for (j, z) in zs.iter().enumerate() {
        acc *= z.pow(j as i64 - n)? * (1 - z.square());
    }
    for (j, k) in (0..zs.len()).tuple_combinations() {
        acc *= (1 - &zs[j] * &zs[k]) * (1 - zs[j].checked_div(&zs[k])?);
    }
    Ok(acc)
}

/// The Weyl denominator as an explicit determinant.
pub fn weyl_denominator_direct(zs: &[Scalar]) -> Result<Scalar> {
    check_spectral(zs)?;
    let n = zs.len() as i64;
    Matrix::try_from_fn(zs.len(), zs.len(), |j, k| {
        let e = n - j as i64;
        Ok(zs[k].pow(e)? - zs[k].pow(-e)?)
    })?
    .determinant()
}

fn nonzero_denominator(zs: &[Scalar]) -> Result<Scalar> {
    let d = weyl_denominator(zs)?;
    if d.is_zero() {
        return Err(Error::DegenerateSpectral("vanishing Weyl denominator".into()));
    }
    Ok(d)
}

fn bialternant(zs: &[Scalar], lambda: &Partition, f: impl Fn(&Scalar, usize) -> Result<Scalar>) -> Result<Scalar> {
    if zs.len() != lambda.len() {
        return precondition("partition length must equal the number of variables");
    }
    let denom = nonzero_denominator(zs)?;
    let mu = lambda.shifted();
    let inv: Vec<Scalar> = zs.iter().map(Scalar::inv).collect::<Result<_>>()?;
    let numer = Matrix::try_from_fn(zs.len(), zs.len(), |j, k| Ok(f(&zs[k], mu[j])? - f(&inv[k], mu[j])?))?.determinant()?;
    numer.checked_div(&denom)
}

/// `sp_λ(z | ᾱ | γ̄) = det(g_{μ_j}(z_k) - g_{μ_j}(z_k⁻¹)) / det(z_k^{N-j+1} - z_k^{-N+j-1})`.
pub fn sp_lambda(zs: &[Scalar], params: &SymParams, lambda: &Partition) -> Result<Scalar> {
    bialternant(zs, lambda, |z, mu| g_mu(z, params, mu))
}

/// `o^±_λ(z | α | γ)`, the same ratio built from `h^±_μ`.
pub fn o_lambda(zs: &[Scalar], u: &Scalar, params: &SymParams, lambda: &Partition, sign: Sign) -> Result<Scalar> {
    bialternant(zs, lambda, |z, mu| h_pm_mu(z, u, params, mu, sign))
}

/// The kind's normalizing product multiplying the symmetric function.
///
/// Type I takes `z` and `t`:
/// `∏ z_j^{j-1-N}(1+tz_j²) ∏_{j<k}(1+tz_jz_k)(1+tz_j z_k⁻¹)`.
/// Type II takes `w` and `u`, with `z = w²`, `t = -u²`:
/// `∏ w_j^{2j-1-2N}(1-u z_j) ∏_{j<k}(1+tz_jz_k)(1+tz_j z_k⁻¹)`.
pub fn prefactor(kind: Kind, xs: &[Scalar], t_or_u: &Scalar) -> Result<Scalar> {
    check_spectral(xs)?;
    let n = xs.len() as i64;
    let (zs, t): (Vec<Scalar>, Scalar) = match kind {
        Kind::I => (xs.to_vec(), t_or_u.clone()),
        Kind::II => (xs.iter().map(Scalar::square).collect(), -t_or_u.square()),
    };
    let mut acc = Scalar::one();
    for (j, x) in xs.iter().enumerate() {
        let j = j as i64 + 1;
        acc *= match kind {
            Kind::I => x.pow(j - 1 - n)? * (1 + &t * x.square()),
            Kind::II => x.pow(2 * j - 1 - 2 * n)? * (1 - t_or_u * &zs[j as usize - 1]),
        };
    }
    for (j, k) in (0..zs.len()).tuple_combinations() {
        acc *= (1 + &t * &zs[j] * &zs[k]) * (1 + &t * zs[j].checked_div(&zs[k])?);
    }
    Ok(acc)
}

const EXPANDED_MAX_N: usize = 6;

fn permutation_sign(p: &[usize]) -> bool {
    let inversions = (0..p.len()).tuple_combinations().filter(|&(i, j)| p[i] > p[j]).count();
    inversions % 2 == 1
}

fn expanded(zs: &[Scalar], lambda: &Partition, f: impl Fn(&Scalar, usize) -> Result<Scalar>) -> Result<Scalar> {
    let n = zs.len();
    if n > EXPANDED_MAX_N {
        return Err(Error::SizeGuard(format!("expanded sum is limited to N <= {EXPANDED_MAX_N}")));
    }
    if lambda.len() != n {
        return precondition("partition length must equal the number of variables");
    }
    let denom = nonzero_denominator(zs)?;
    let mu = lambda.shifted();
    let inv: Vec<Scalar> = zs.iter().map(Scalar::inv).collect::<Result<_>>()?;
    // values[j][k][0] = f(z_k, μ_j), values[j][k][1] = f(z_k⁻¹, μ_j)
    let mut values = Vec::with_capacity(n);
    for &m in &mu {
        let mut row = Vec::with_capacity(n);
        for k in 0..n {
            row.push([f(&zs[k], m)?, f(&inv[k], m)?]);
        }
        values.push(row);
    }
    let mut numer = Scalar::zero();
    for sigma in (0..n).permutations(n) {
        let odd_sigma = permutation_sign(&sigma);
        for tau in 0..(1u32 << n) {
            let flips = tau.count_ones() as usize;
            let term: Scalar = (0..n).map(|j| &values[j][sigma[j]][((tau >> j) & 1) as usize]).product();
            if odd_sigma ^ (flips % 2 == 1) {
                numer -= term;
            } else {
                numer += term;
            }
        }
    }
    numer.checked_div(&denom)
}

/// `sp_λ` by explicit summation over `σ ∈ S_N`, `τ ∈ {±1}^N` with sign
/// `(-1)^σ (-1)^{|τ|}`.
pub fn sp_expanded_sum(zs: &[Scalar], params: &SymParams, lambda: &Partition) -> Result<Scalar> {
    expanded(zs, lambda, |z, mu| g_mu(z, params, mu))
}

/// `o^±_λ` by the same `(σ, τ)` summation.
pub fn o_expanded_sum(zs: &[Scalar], u: &Scalar, params: &SymParams, lambda: &Partition, sign: Sign) -> Result<Scalar> {
    expanded(zs, lambda, |z, mu| h_pm_mu(z, u, params, mu, sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partitions_from_positions() {
        assert_eq!(positions_to_partition(&[1, 2, 3]).unwrap(), p(&[0, 0, 0]));
        assert_eq!(positions_to_partition(&[2, 3, 5]).unwrap(), p(&[2, 1, 1]));
        assert_eq!(partition_to_positions(&p(&[2, 1, 1])), vec![2, 3, 5]);
        assert!(positions_to_partition(&[3, 2]).is_err());
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn complements() {
        assert_eq!(complement_positions(&[1, 2, 3], 3).unwrap(), Vec::<usize>::new());
        assert_eq!(complement_positions(&[2], 3).unwrap(), vec![1, 3]);
    }

    #[test]
    fn hat_examples() {
        assert_eq!(hat_partition(&p(&[3, 1]), 3).unwrap(), p(&[1, 1, 0]));
        assert_eq!(hat_partition(&p(&[0, 0]), 3).unwrap(), p(&[2, 2, 2]));
        assert_eq!(hat_partition(&p(&[3, 3]), 3).unwrap(), p(&[0, 0, 0]));
        assert!(hat_partition(&p(&[4]), 3).is_err());
    }

    #[test]
    fn box_enumeration_counts() {
        assert_eq!(Partition::in_box(2, 3).len(), 10);
        assert_eq!(Partition::in_box(3, 3).len(), 20);
        assert_eq!(Partition::in_box(0, 3), vec![Partition::zeros(0)]);
    }

    #[test]
    fn g_mu_trivial_parameters() {
        let z = s("3/2");
        let params = SymParams::zeros(0, 4);
        for mu in 0..4 {
            assert_eq!(g_mu(&z, &params, mu).unwrap(), z.pow(mu as i64 + 1).unwrap());
        }
        assert!(g_mu(&z, &params, 4).is_err());
    }

    #[test]
    fn g_mu_hand_value() {
        // {α₀+(1-α₀γ₀)z} = 3; ∏_{j=2}^{2}(1-γ₂z) = 1; ∏_{j=1}^{2}(1-γ_j/z) = -3/2.
        let params = SymParams::new(vec![s("1"), s("0"), s("0")], vec![s("0"), s("5"), s("0")], 0).unwrap();
        assert_eq!(g_mu(&s("2"), &params, 0).unwrap(), s("-9/2"));
    }

    #[test]
    fn h_examples() {
        let z = s("2");
        let u = s("1");
        let params = SymParams::new(vec![s("0")], vec![s("3")], 1).unwrap();
        assert_eq!(h_pm_mu(&z, &u, &params, 0, Sign::Plus).unwrap(), s("-3/2"));
        let zero = SymParams::zeros(1, 2);
        assert_eq!(h_pm_mu(&z, &u, &zero, 0, Sign::Plus).unwrap(), s("3"));
        assert_eq!(h_pm_mu(&z, &u, &zero, 0, Sign::Minus).unwrap(), s("1"));
    }

    #[test]
    fn weyl_examples() {
        assert_eq!(weyl_denominator(&[s("2")]).unwrap(), s("3/2"));
        assert_eq!(weyl_denominator_direct(&[s("2")]).unwrap(), s("3/2"));
        let zs = [s("2"), s("3")];
        assert_eq!(weyl_denominator(&zs).unwrap(), weyl_denominator_direct(&zs).unwrap());
    }

    #[test]
    fn classical_characters() {
        let lam1 = p(&[1]);
        assert_eq!(sp_lambda(&[s("2")], &SymParams::zeros(0, 2), &lam1).unwrap(), s("5/2"));
        assert_eq!(sp_lambda(&[s("7/3")], &SymParams::zeros(0, 1), &p(&[0])).unwrap(), Scalar::one());
        let zs = [s("2"), s("3")];
        assert_eq!(sp_lambda(&zs, &SymParams::zeros(0, 3), &p(&[1, 0])).unwrap(), s("35/6"));
    }

    #[test]
    fn whittaker_examples() {
        let z = [s("2")];
        let u = s("1");
        for sign in [Sign::Plus, Sign::Minus] {
            assert_eq!(o_lambda(&z, &u, &SymParams::zeros(1, 1), &p(&[0]), sign).unwrap(), Scalar::one());
        }
        // [(z+u)z - (z⁻¹+u)z⁻¹] / (z - z⁻¹) at z = 2, u = 1
        assert_eq!(o_lambda(&z, &u, &SymParams::zeros(1, 2), &p(&[1]), Sign::Plus).unwrap(), s("7/2"));
    }

    #[test]
    fn prefactor_examples() {
        assert_eq!(prefactor(Kind::I, &[s("2")], &s("3")).unwrap(), s("13/2"));
        assert_eq!(prefactor(Kind::II, &[s("2")], &s("1")).unwrap(), s("-3/2"));
        let (z1, z2, t) = (s("2"), s("5"), s("3"));
        let expect = z1.pow(-2).unwrap() * (1 + &t * z1.square()) * z2.pow(-1).unwrap() * (1 + &t * z2.square())
            * (1 + &t * &z1 * &z2)
            * (1 + &t * &z1 * z2.inv().unwrap());
        assert_eq!(prefactor(Kind::I, &[z1, z2], &t).unwrap(), expect);
    }

    #[test]
    fn degenerate_spectral_set() {
        let zs = [s("2"), s("1/2")];
        assert!(matches!(
            sp_lambda(&zs, &SymParams::zeros(0, 3), &p(&[0, 0])),
            Err(Error::DegenerateSpectral(_))
        ));
    }

    #[test]
    fn expanded_sum_single_variable() {
        let params = SymParams::new(vec![s("2"), s("1/3"), s("-1")], vec![s("1/5"), s("4"), s("3/7")], 0).unwrap();
        let z = [s("5/2")];
        assert_eq!(sp_expanded_sum(&z, &params, &p(&[1])).unwrap(), sp_lambda(&z, &params, &p(&[1])).unwrap());
    }
}
