//! Monodromy and double-row operators on the `2^M`-dimensional quantum space.
//!
//! A basis state is a bitmask with bit `j-1` set iff site `j` is occupied.

use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Kind, ParamPoint, Scalar};
use crate::vertex::{k_type1, k_type2, l_delta, l_gamma, Mat2, Mat4, MutationTarget};

/// Hard cap on the number of sites.
pub const MAX_SITES: usize = 20;

/// An occupation pattern on `M` sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FockState(pub u32);

impl FockState {
    pub fn popcount(self) -> usize {
        self.0.count_ones() as usize
    }
}

fn check_positions(positions: &[usize], m: usize) -> Result<()> {
    if positions.iter().any(|&x| x < 1 || x > m) {
        return precondition(format!("positions must lie in 1..={m}"));
    }
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        return precondition("positions must be strictly increasing");
    }
    Ok(())
}

/// `|x₁ … x_N⟩`: particles at the given 1-based sites.
pub fn positions_to_state(positions: &[usize], m: usize) -> Result<FockState> {
    check_positions(positions, m)?;
    Ok(FockState(positions.iter().fold(0u32, |s, &x| s | (1 << (x - 1)))))
}

pub fn state_to_positions(state: FockState) -> Vec<usize> {
    (0..32).filter(|b| state.0 >> b & 1 == 1).map(|b| b + 1).collect()
}

/// `|x̄₁ … x̄_N⟩`: the fully occupied state with holes at the given sites.
pub fn hole_state(holes: &[usize], m: usize) -> Result<FockState> {
    let holes = positions_to_state(holes, m)?;
    Ok(FockState(full_mask(m) & !holes.0))
}

fn full_mask(m: usize) -> u32 {
    if m == 0 {
        0
    } else {
        u32::MAX >> (32 - m)
    }
}

/// A dense vector over the occupation basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateVector {
    m: usize,
    amps: Vec<Scalar>,
}

impl StateVector {
    pub fn zero(m: usize) -> Self {
        assert!(m <= MAX_SITES, "at most {MAX_SITES} sites");
        StateVector { m, amps: vec![Scalar::zero(); 1 << m] }
    }

    pub fn basis(m: usize, state: FockState) -> Self {
        let mut v = StateVector::zero(m);
        v.amps[state.0 as usize] = Scalar::one();
        v
    }

    pub fn from_amplitudes(m: usize, amps: Vec<Scalar>) -> Result<Self> {
        if m > MAX_SITES || amps.len() != 1 << m {
            return precondition(format!("a state vector on {m} sites has {} entries", 1u64 << m));
        }
        Ok(StateVector { m, amps })
    }

    pub fn sites(&self) -> usize {
        self.m
    }

    pub fn amplitudes(&self) -> &[Scalar] {
        &self.amps
    }

    pub fn get(&self, state: FockState) -> &Scalar {
        &self.amps[state.0 as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> StateVector {
        StateVector { m: self.m, amps: self.amps.iter().map(|a| a * c).collect() }
    }

    pub fn axpy(&mut self, c: &Scalar, other: &StateVector) {
        assert_eq!(self.m, other.m);
        if c.is_zero() {
            return;
        }
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    pub fn nonzero_states(&self) -> impl Iterator<Item = (FockState, &Scalar)> {
        self.amps.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(s, a)| (FockState(s as u32), a))
    }
}

/// Matrix elements of the two monodromy matrices in the auxiliary space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonodromyElement {
    /// `⟨0|T|0⟩`
    A,
    /// `⟨0|T|1⟩`
    B,
    /// `⟨1|T̃|1⟩`
    ATilde,
    /// `⟨0|T̃|1⟩`
    BTilde,
}

impl MonodromyElement {
    /// (auxiliary input, auxiliary output)
    fn aux(self) -> (usize, usize) {
        match self {
            MonodromyElement::A => (0, 0),
            MonodromyElement::B => (1, 0),
            MonodromyElement::ATilde => (1, 1),
            MonodromyElement::BTilde => (1, 0),
        }
    }

    fn is_tilde(self) -> bool {
        matches!(self, MonodromyElement::ATilde | MonodromyElement::BTilde)
    }
}

/// The type Γ operator at site `j`, honouring the point's mutation.
pub fn site_gamma(point: &ParamPoint, j: usize, arg: &Scalar) -> Mat4 {
    let mut l = l_gamma(arg, &point.t, &point.alpha[j], &point.gamma[j]);
    if let Some(m) = &point.mutation {
        m.apply_l(MutationTarget::LGamma, &mut l);
    }
    l
}

/// The type Δ operator at site `j`, honouring the point's mutation.
pub fn site_delta(point: &ParamPoint, j: usize, arg: &Scalar) -> Mat4 {
    let mut l = l_delta(arg, &point.t, &point.alpha[j], &point.gamma[j]);
    if let Some(m) = &point.mutation {
        m.apply_l(MutationTarget::LDelta, &mut l);
    }
    l
}

/// The boundary K-matrix of the kind at spectral argument `x` (`z` or `w`).
pub fn boundary_k(kind: Kind, point: &ParamPoint, x: &Scalar) -> Result<Mat2> {
    let mut k = match kind {
        Kind::I => k_type1(x, &point.t, &point.alpha[0], &point.gamma[0])?,
        Kind::II => k_type2(x, point.u()?)?,
    };
    if let Some(m) = &point.mutation {
        let target = match kind {
            Kind::I => MutationTarget::KTypeI,
            Kind::II => MutationTarget::KTypeII,
        };
        m.apply_k(target, &mut k);
    }
    Ok(k)
}

/// Apply a site operator to a pair of quantum vectors indexed by the auxiliary state.
fn apply_site(l: &Mat4, pair: &[StateVector; 2], site: usize) -> [StateVector; 2] {
    let m = pair[0].m;
    let bit = 1u32 << (site - 1);
    let mut out = [StateVector::zero(m), StateVector::zero(m)];
    for (ai, v) in pair.iter().enumerate() {
        for (s, amp) in v.nonzero_states() {
            let qi = ((s.0 & bit) != 0) as usize;
            let col = 2 * ai + qi;
            for ao in 0..2 {
                for qo in 0..2 {
                    let w = &l.0[2 * ao + qo][col];
                    if w.is_zero() {
                        continue;
                    }
                    let target = if qo == 1 { s.0 | bit } else { s.0 & !bit };
                    out[ao].amps[target as usize] += w * amp;
                }
            }
        }
    }
    out
}

/// Act with a monodromy matrix element at spectral parameter `z`.
///
/// `T(z) = L_M(1/z) ⋯ L_1(1/z)` with type Γ operators and
/// `T̃(z) = L̃_1(z) ⋯ L̃_M(z)` with type Δ operators.
pub fn apply_monodromy_element(elem: MonodromyElement, z: &Scalar, point: &ParamPoint, v: &StateVector) -> Result<StateVector> {
    if v.m != point.m {
        return precondition("state vector and point disagree on M");
    }
    let (ain, aout) = elem.aux();
    let m = point.m;
    let mut pair = [StateVector::zero(m), StateVector::zero(m)];
    pair[ain] = v.clone();
    if elem.is_tilde() {
        for j in (1..=m).rev() {
            pair = apply_site(&site_delta(point, j, z), &pair, j);
        }
    } else {
        let zinv = z.inv()?;
        for j in 1..=m {
            pair = apply_site(&site_gamma(point, j, &zinv), &pair, j);
        }
    }
    let [p0, p1] = pair;
    Ok(if aout == 0 { p0 } else { p1 })
}

fn spectral_z(kind: Kind, x: &Scalar) -> Scalar {
    match kind {
        Kind::I => x.clone(),
        Kind::II => x.square(),
    }
}

/// The double-row B-operator: `x` is `z` for type I and `w` (with `z = w²`)
/// for type II.
///
/// With `U = T̃ᵗ K Tᵗ` in the auxiliary space, `B = U₁₀`, i.e.
/// `K₀₀ B̃A + K₀₁ B̃B + K₁₀ ÃA + K₁₁ ÃB`; only the diagonal terms survive
/// for the unmutated K-matrices.
pub fn apply_double_row_b(kind: Kind, x: &Scalar, point: &ParamPoint, v: &StateVector) -> Result<StateVector> {
    point.require(kind)?;
    if x.is_zero() {
        return precondition("spectral parameter must be nonzero");
    }
    let z = spectral_z(kind, x);
    let k = boundary_k(kind, point, x)?;
    let mut out = StateVector::zero(point.m);
    let mono = |e, v: &StateVector| apply_monodromy_element(e, &z, point, v);
    use MonodromyElement::*;
    let (a_v, b_v) = (
        if k.0[0][0].is_zero() && k.0[1][0].is_zero() { None } else { Some(mono(A, v)?) },
        if k.0[1][1].is_zero() && k.0[0][1].is_zero() { None } else { Some(mono(B, v)?) },
    );
    let terms = [(0, 0, BTilde, &a_v), (0, 1, BTilde, &b_v), (1, 0, ATilde, &a_v), (1, 1, ATilde, &b_v)];
    for (r, c, outer, inner) in terms {
        let coeff = &k.0[r][c];
        if coeff.is_zero() {
            continue;
        }
        let inner = inner.as_ref().expect("inner image computed for nonzero coefficient");
        out.axpy(coeff, &mono(outer, inner)?);
    }
    Ok(out)
}

/// `B(x₁) ⋯ B(x_n) v`, with `B(x_n)` applied first.
pub fn apply_b_sequence(kind: Kind, xs: &[Scalar], point: &ParamPoint, v: &StateVector) -> Result<StateVector> {
    let mut v = v.clone();
    for x in xs.iter().rev() {
        v = apply_double_row_b(kind, x, point, &v)?;
    }
    Ok(v)
}

fn check_point(kind: Kind, point: &ParamPoint) -> Result<()> {
    point.validate()?;
    point.require(kind)?;
    if point.m > MAX_SITES {
        return Err(Error::SizeGuard(format!("M = {} exceeds {MAX_SITES}", point.m)));
    }
    if point.n > point.m {
        return precondition("N must not exceed M");
    }
    Ok(())
}

/// `B(z₁) ⋯ B(z_N)|0^M⟩`; its amplitudes are the wavefunctions for every
/// position list at once.
pub fn wavefunction_vector(kind: Kind, point: &ParamPoint) -> Result<StateVector> {
    check_point(kind, point)?;
    let start = StateVector::basis(point.m, FockState(0));
    apply_b_sequence(kind, point.spectral(kind)?, point, &start)
}

/// `⟨x₁ … x_N| B(z₁) ⋯ B(z_N) |0^M⟩`.
pub fn wavefunction(kind: Kind, point: &ParamPoint, positions: &[usize]) -> Result<Scalar> {
    if positions.len() != point.n {
        return precondition(format!("expected {} positions, got {}", point.n, positions.len()));
    }
    let target = positions_to_state(positions, point.m)?;
    Ok(wavefunction_vector(kind, point)?.get(target).clone())
}

/// `⟨1^M| B(z₁) ⋯ B(z_N) |x̄₁ … x̄_N⟩`.
pub fn dual_wavefunction(kind: Kind, point: &ParamPoint, holes: &[usize]) -> Result<Scalar> {
    check_point(kind, point)?;
    if holes.len() != point.n {
        return precondition(format!("expected {} hole positions, got {}", point.n, holes.len()));
    }
    let start = StateVector::basis(point.m, hole_state(holes, point.m)?);
    let v = apply_b_sequence(kind, point.spectral(kind)?, point, &start)?;
    Ok(v.get(FockState(full_mask(point.m))).clone())
}

/// The domain-wall partition function: the wavefunction at `N = M`, `x = (1, …, M)`.
pub fn dwbp(kind: Kind, point: &ParamPoint) -> Result<Scalar> {
    if point.n != point.m {
        return precondition("domain-wall partition function requires N = M");
    }
    let positions: Vec<usize> = (1..=point.m).collect();
    wavefunction(kind, point, &positions)
}

/// A site operator as an explicit operator on `W_a ⊗ V_1 ⊗ ⋯ ⊗ V_M`.
///
/// The auxiliary factor is outermost; site `j` sits at bit `j-1` of the
/// quantum index, so the Kronecker factors run `V_M, …, V_1`.
fn kron_site_operator(l: &Mat4, site: usize, m: usize) -> Matrix {
    let unit = |r: usize, c: usize| Matrix::from_fn(2, 2, |i, j| if (i, j) == (r, c) { Scalar::one() } else { Scalar::zero() });
    let mut total = Matrix::zeros(2 << m, 2 << m);
    for ao in 0..2 {
        for ai in 0..2 {
            for qo in 0..2 {
                for qi in 0..2 {
                    let w = &l.0[2 * ao + qo][2 * ai + qi];
                    if w.is_zero() {
                        continue;
                    }
                    let mut term = unit(ao, ai);
                    for k in (1..=m).rev() {
                        term = term.kron(&if k == site { unit(qo, qi) } else { Matrix::identity(2) });
                    }
                    total = total.add(&term.scale(w));
                }
            }
        }
    }
    total
}

fn aux_block(t: &Matrix, aout: usize, ain: usize, m: usize) -> Matrix {
    let d = 1 << m;
    Matrix::from_fn(d, d, |i, j| t[(aout * d + i, ain * d + j)].clone())
}

/// The double-row B-operator of the kind as an explicit `2^M × 2^M` matrix.
pub fn double_row_b_matrix(kind: Kind, x: &Scalar, point: &ParamPoint) -> Result<Matrix> {
    let m = point.m;
    let z = spectral_z(kind, x);
    let zinv = z.inv()?;
    let mut t = Matrix::identity(2 << m);
    for j in 1..=m {
        t = kron_site_operator(&site_gamma(point, j, &zinv), j, m).mul(&t);
    }
    let mut tt = Matrix::identity(2 << m);
    for j in 1..=m {
        tt = tt.mul(&kron_site_operator(&site_delta(point, j, &z), j, m));
    }
    let (a, b) = (aux_block(&t, 0, 0, m), aux_block(&t, 0, 1, m));
    let (at, bt) = (aux_block(&tt, 1, 1, m), aux_block(&tt, 0, 1, m));
    let k = boundary_k(kind, point, x)?;
    let d = 1 << m;
    let mut out = Matrix::zeros(d, d);
    for (coeff, outer, inner) in [(&k.0[0][0], &bt, &a), (&k.0[0][1], &bt, &b), (&k.0[1][0], &at, &a), (&k.0[1][1], &at, &b)] {
        if !coeff.is_zero() {
            out = out.add(&outer.mul(inner).scale(coeff));
        }
    }
    Ok(out)
}

/// The same matrix element as [`wavefunction`], from explicit Kronecker
/// assembly of every operator.
pub fn brute_force_wavefunction(kind: Kind, point: &ParamPoint, positions: &[usize]) -> Result<Scalar> {
    check_point(kind, point)?;
    if point.m > 10 || point.n > 4 {
        return Err(Error::SizeGuard("brute force is limited to M <= 10, N <= 4".into()));
    }
    if positions.len() != point.n {
        return precondition(format!("expected {} positions, got {}", point.n, positions.len()));
    }
    let target = positions_to_state(positions, point.m)?;
    let d = 1usize << point.m;
    let mut total = Matrix::identity(d);
    for x in point.spectral(kind)? {
        total = total.mul(&double_row_b_matrix(kind, x, point)?);
    }
    Ok(total[(target.0 as usize, 0)].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    fn trivial_point(t: &str, z: &[&str], m: usize) -> ParamPoint {
        ParamPoint::type_one(s(t), z.iter().map(|v| s(v)).collect(), ParamPoint::zeros(m), ParamPoint::zeros(m)).unwrap()
    }

    #[test]
    fn positions_and_holes() {
        assert_eq!(positions_to_state(&[1, 3], 3).unwrap(), FockState(0b101));
        assert_eq!(state_to_positions(FockState(0b101)), vec![1, 3]);
        assert_eq!(hole_state(&[2], 3).unwrap(), FockState(0b101));
        assert!(positions_to_state(&[2, 2], 3).is_err());
        assert!(positions_to_state(&[4], 3).is_err());
        assert!(positions_to_state(&[0], 3).is_err());
    }

    #[test]
    fn single_site_a_on_vacuum() {
        let mut p = trivial_point("3", &["2"], 1);
        p.gamma[1] = s("5");
        let v = StateVector::basis(1, FockState(0));
        let out = apply_monodromy_element(MonodromyElement::A, &s("2"), &p, &v).unwrap();
        // (1,1) entry of the type Γ operator at 1/z: 1 - γ₁/z
        assert_eq!(out.get(FockState(0)), &s("-3/2"));
        assert!(out.get(FockState(1)).is_zero());
    }

    #[test]
    fn single_site_b_on_vacuum() {
        // ⟨0|T|1⟩ at one site is the (2,3) entry of the Γ operator, equal to 1.
        let p = trivial_point("3", &["2"], 1);
        let v = StateVector::basis(1, FockState(0));
        let out = apply_monodromy_element(MonodromyElement::B, &s("2"), &p, &v).unwrap();
        assert_eq!(out.get(FockState(1)), &Scalar::one());
        assert!(out.get(FockState(0)).is_zero());
    }

    #[test]
    fn one_particle_value() {
        let p = trivial_point("3", &["2"], 1);
        assert_eq!(wavefunction(Kind::I, &p, &[1]).unwrap(), s("13/2"));
        assert_eq!(brute_force_wavefunction(Kind::I, &p, &[1]).unwrap(), s("13/2"));
        assert_eq!(dwbp(Kind::I, &p).unwrap(), s("13/2"));
    }

    #[test]
    fn empty_product_is_one() {
        let p = trivial_point("3", &[], 3);
        assert_eq!(wavefunction(Kind::I, &p, &[]).unwrap(), Scalar::one());
        assert_eq!(brute_force_wavefunction(Kind::I, &p, &[]).unwrap(), Scalar::one());
    }

    #[test]
    fn dual_with_full_holes_is_dwbp() {
        let p = trivial_point("3", &["2", "5/3"], 2);
        assert_eq!(dual_wavefunction(Kind::I, &p, &[1, 2]).unwrap(), dwbp(Kind::I, &p).unwrap());
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = trivial_point("3", &["2"], 2);
        assert!(wavefunction(Kind::I, &p, &[3]).is_err());
        assert!(wavefunction(Kind::I, &p, &[1, 2]).is_err());
        assert!(wavefunction(Kind::II, &p, &[1]).is_err());
        assert!(dwbp(Kind::I, &p).is_err());
    }
}
