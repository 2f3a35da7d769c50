//! Torus-invariant divisors, moment polytopes, Okounkov bodies along
//! torus-invariant flags, S/T-invariants and toric log discrepancies.

use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{from_int, Rat};
use crate::fan::Fan;
use crate::flag::FlagChain;
use crate::lattice::{fmt_rats, LatticeVector};
use crate::linalg::{self, Matrix};
use crate::polytope::{from_halfspaces_unchecked, Halfspace, MassData, Polytope};

/// `D = Σ a_ρ V(v_ρ)`.
#[derive(Clone, Debug)]
pub struct ToricDivisor {
    pub fan: Arc<Fan>,
    pub coefficients: Vec<Rat>,
    moment: OnceLock<std::result::Result<MomentData, Error>>,
}

impl PartialEq for ToricDivisor {
    fn eq(&self, o: &Self) -> bool {
        *self.fan == *o.fan && self.coefficients == o.coefficients
    }
}

/// Moment polytope of a big divisor with its volume and barycenter.
#[derive(Clone, Debug)]
pub struct MomentData {
    pub polytope: Polytope,
    pub mass: MassData,
}

impl MomentData {
    pub fn volume(&self) -> &Rat {
        &self.mass.volume
    }

    pub fn barycenter(&self) -> &[Rat] {
        self.mass.barycenter.as_deref().expect("big divisors have a barycenter")
    }
}

impl ToricDivisor {
    pub fn new(fan: Arc<Fan>, coefficients: Vec<Rat>) -> Result<Self> {
        if coefficients.len() != fan.rays.len() {
            return Err(Error::DimensionMismatch { expected: fan.rays.len(), found: coefficients.len() });
        }
        Ok(ToricDivisor { fan, coefficients, moment: OnceLock::new() })
    }

    pub fn from_i64(fan: Arc<Fan>, coefficients: &[i64]) -> Result<Self> {
        Self::new(fan, coefficients.iter().map(|&a| Rat::from_integer(a.into())).collect())
    }

    pub fn scaled(&self, s: &Rat) -> Self {
        Self::new(self.fan.clone(), self.coefficients.iter().map(|a| a * s).collect()).expect("same length")
    }

    pub fn plus(&self, o: &ToricDivisor) -> Self {
        Self::new(self.fan.clone(), linalg::add(&self.coefficients, &o.coefficients)).expect("same fan")
    }

    /// `D − div(χ^u)`.
    pub fn minus_principal(&self, u: &[Rat]) -> Self {
        let c = self.fan.rays.iter().zip(&self.coefficients).map(|(r, a)| a - r.pair(u)).collect();
        Self::new(self.fan.clone(), c).expect("same length")
    }

    /// `P_D = {u : ⟨u, v_ρ⟩ ≥ −a_ρ}`.
    pub fn moment_polytope(&self) -> Result<Polytope> {
        let hs = self
            .fan
            .rays
            .iter()
            .zip(&self.coefficients)
            .map(|(r, a)| Halfspace::new(r.to_rats(), -a.clone()))
            .collect();
        from_halfspaces_unchecked(self.fan.rank, hs)
    }

    /// Moment data of a big divisor; `NotBig` otherwise.
    pub fn moment_data(&self) -> Result<&MomentData> {
        self.moment
            .get_or_init(|| {
                let p = match self.moment_polytope() {
                    Ok(p) => p,
                    Err(Error::Empty) => return Err(Error::NotBig),
                    Err(Error::Unbounded) => {
                        return Err(Error::InvalidInput("moment polytope is unbounded; the fan is not complete".into()))
                    }
                    Err(e) => return Err(e),
                };
                if !p.full_dim {
                    return Err(Error::NotBig);
                }
                let mass = p.mass();
                Ok(MomentData { polytope: p, mass })
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn is_big(&self) -> bool {
        self.moment_data().is_ok()
    }

    pub fn volume(&self) -> Result<Rat> {
        Ok(self.moment_data()?.volume().clone())
    }

    /// `a_v = Σ λ_k a_{ρ_k}` for `v = Σ λ_k v_{ρ_k}` in a cone containing `v`:
    /// the coefficient of `V(v)` in the pullback of `D` to the star subdivision.
    pub fn support_value(&self, v: &[Rat]) -> Result<Rat> {
        let (c, lam) = self.fan.locate(v)?;
        Ok(self.fan.cones[c]
            .iter()
            .zip(&lam)
            .fold(Rat::zero(), |s, (&r, l)| s + l * &self.coefficients[r]))
    }
}

pub fn normalize_divisor(d: &ToricDivisor, cone: usize) -> Result<ToricDivisor> {
    if cone >= d.fan.cones.len() || !d.fan.is_full_dim_cone(cone) {
        return Err(Error::ConeNotFullDim(cone));
    }
    let rows: Matrix = d.fan.cones[cone].iter().map(|&r| d.fan.rays[r].to_rats()).collect();
    let rhs: Vec<Rat> = d.fan.cones[cone].iter().map(|&r| d.coefficients[r].clone()).collect();
    let u = linalg::solve_square(&rows, &rhs).ok_or(Error::ConeNotFullDim(cone))?;
    Ok(d.minus_principal(&u))
}

pub fn moment_polytope(d: &ToricDivisor) -> Result<Polytope> {
    d.moment_polytope()
}

/// `(S(D; v), T(D; v))`.
pub fn s_t_invariants(d: &ToricDivisor, v: &LatticeVector) -> Result<(Rat, Rat)> {
    let md = d.moment_data()?;
    let vq = v.to_rats();
    let a = d.support_value(&vq)?;
    let s = &a + linalg::dot(md.barycenter(), &vq);
    let t = &a + md.polytope.max_linear(&vq).expect("nonempty");
    Ok((s, t))
}

pub fn s_invariant(d: &ToricDivisor, v: &LatticeVector) -> Result<Rat> {
    Ok(s_t_invariants(d, v)?.0)
}

#[derive(Clone, Debug)]
pub struct OkounkovBody {
    pub body: Polytope,
    /// `ψ∘φ`, applied to `P_D` of the normalized divisor.
    pub transform: Matrix,
    /// `D` normalized to vanish on `τ_0`.
    pub normalized: ToricDivisor,
}

/// `ψ = (c'_{j,k})` upper triangular.
pub fn psi_matrix(flag: &FlagChain) -> Matrix {
    let n = flag.rank;
    (0..n)
        .map(|j| (0..n).map(|k| if k >= j { flag.c_prime[j][k].clone() } else { Rat::zero() }).collect())
        .collect()
}

/// `φ(u) = (⟨u, v_{1,k}⟩)_k`.
pub fn phi_matrix(flag: &FlagChain) -> Matrix {
    flag.tau0_rays().iter().map(LatticeVector::to_rats).collect()
}

pub fn okounkov_body(d: &ToricDivisor, flag: &FlagChain) -> Result<OkounkovBody> {
    if !flag.is_complete() {
        return Err(Error::IncompleteFlag { depth: flag.depth, rank: flag.rank });
    }
    body_of_chain(d, flag)
}

fn body_of_chain(d: &ToricDivisor, flag: &FlagChain) -> Result<OkounkovBody> {
    if *d.fan != flag.fans[0] {
        return Err(Error::InvalidInput("divisor and flag live on different fans".into()));
    }
    let normalized = normalize_divisor(d, flag.tau[0])?;
    let md = normalized.moment_data()?;
    let transform = linalg::mat_mul(&psi_matrix(flag), &phi_matrix(flag));
    if let Some(l) = &flag.l_values {
        let phi = phi_matrix(flag);
        let admissible: Matrix = (0..flag.rank)
            .map(|j| linalg::scale(&phi[j], &(from_int(&l[j]) / from_int(&l[j + 1]))))
            .collect();
        if admissible != transform {
            return Err(Error::Internal("admissible transform disagrees with ψ∘φ".into()));
        }
    }
    let body = md.polytope.affine_image(&transform, &vec![Rat::zero(); flag.rank])?;
    Ok(OkounkovBody { body, transform, normalized })
}

/// `S(L; Y₁ ▷ … ▷ Y_j) = Σ_{k≥j} c'_{j,k} S(L; V(v_{1,k}))`, 1-based level.
pub fn flag_s_invariant(d: &ToricDivisor, flag: &FlagChain, j: usize) -> Result<Rat> {
    Ok(flag_s_invariants(d, flag)?[j_index(flag, j)?].clone())
}

/// Levels `1..=depth`, each checked against the Okounkov body barycenter.
pub fn flag_s_invariants(d: &ToricDivisor, flag: &FlagChain) -> Result<Vec<Rat>> {
    let rays = flag.tau0_rays();
    let ray_s: Vec<Rat> = rays.iter().map(|v| s_invariant(d, v)).collect::<Result<_>>()?;
    let body = body_of_chain(d, flag)?;
    let bary = body.body.mass().barycenter.ok_or(Error::NotBig)?;
    let mut out = Vec::with_capacity(flag.depth);
    for j in 0..flag.depth {
        let s = (j..flag.rank).fold(Rat::zero(), |acc, k| acc + &flag.c_prime[j][k] * &ray_s[k]);
        if s != bary[j] {
            return Err(Error::Internal(format!(
                "level {} S-invariant {} differs from Okounkov barycenter {}",
                j + 1,
                crate::exact::format_rational(&s),
                crate::exact::format_rational(&bary[j])
            )));
        }
        out.push(s);
    }
    Ok(out)
}

fn j_index(flag: &FlagChain, j: usize) -> Result<usize> {
    if j == 0 || j > flag.depth {
        return Err(Error::InvalidInput(format!("level {j} outside 1..={}", flag.depth)));
    }
    Ok(j - 1)
}

/// `B = Σ b_ρ V(v_ρ)` with every `b_ρ < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryData {
    pub coefficients: Vec<Rat>,
}

impl BoundaryData {
    pub fn new(fan: &Fan, coefficients: Vec<Rat>) -> Result<Self> {
        if coefficients.len() != fan.rays.len() {
            return Err(Error::DimensionMismatch { expected: fan.rays.len(), found: coefficients.len() });
        }
        if let Some((i, b)) = coefficients.iter().enumerate().find(|(_, b)| **b >= Rat::one()) {
            return Err(Error::InvalidInput(format!(
                "boundary coefficient {} on ray {i} is not below 1",
                crate::exact::format_rational(b)
            )));
        }
        Ok(BoundaryData { coefficients })
    }

    pub fn zero(fan: &Fan) -> Self {
        BoundaryData { coefficients: vec![Rat::zero(); fan.rays.len()] }
    }
}

/// `A_{X,B}(v) = Σ λ_k (1 − b_{ρ_k})`.
pub fn log_discrepancy(fan: &Fan, b: &BoundaryData, v: &[Rat]) -> Result<Rat> {
    let (c, lam) = fan.locate(v).map_err(|_| Error::OutsideSupport(fmt_rats(v)))?;
    Ok(fan.cones[c]
        .iter()
        .zip(&lam)
        .fold(Rat::zero(), |s, (&r, l)| s + l * (Rat::one() - &b.coefficients[r])))
}

/// `A_{Y_{j-1},B_{j-1}}(Y_j) = Σ_{k≥j} c'_{j,k} A_{X,B}(V(v_{1,k}))`, 1-based level.
pub fn flag_log_discrepancy(b: &BoundaryData, flag: &FlagChain, j: usize) -> Result<Rat> {
    let j0 = j_index(flag, j)?;
    let idx = flag.tau0_ray_indices();
    Ok((j0..flag.rank).fold(Rat::zero(), |acc, k| {
        acc + &flag.c_prime[j0][k] * (Rat::one() - &b.coefficients[idx[k]])
    }))
}

pub fn flag_log_discrepancies(b: &BoundaryData, flag: &FlagChain) -> Result<Vec<Rat>> {
    (1..=flag.depth).map(|j| flag_log_discrepancy(b, flag, j)).collect()
}
