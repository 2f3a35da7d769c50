//! Coupled α/δ thresholds over torus-invariant candidates, flag chain
//! lower bounds, the parametric Zariski path on toric surfaces, and the
//! closed-form curve, Hirzebruch and product oracles.

use std::sync::Arc;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rational, from_int, Rat};
use crate::fan::Fan;
use crate::flag::{build_flag_chain, FlagChain, FlagFrame};
use crate::lattice::LatticeVector;
use crate::linalg::{self, Matrix};
use crate::okounkov::{
    flag_log_discrepancies, flag_s_invariants, log_discrepancy, s_t_invariants, BoundaryData, ToricDivisor,
};
use crate::poly::Polynomial;

pub const MAX_TERMS: usize = 8;
pub const MAX_RANK: usize = 4;

#[derive(Clone, Debug)]
pub struct CoupledProblem {
    pub fan: Arc<Fan>,
    pub boundary: BoundaryData,
    /// `(c_i, L_i)`.
    pub terms: Vec<(Rat, ToricDivisor)>,
    pub candidates: Vec<LatticeVector>,
    pub flags: Vec<FlagChain>,
}

impl CoupledProblem {
    /// Validates the data; an empty candidate list becomes the rays plus
    /// the first vector of every flag.
    pub fn new(
        fan: Arc<Fan>,
        boundary: BoundaryData,
        terms: Vec<(Rat, ToricDivisor)>,
        candidates: Vec<LatticeVector>,
        flags: Vec<FlagChain>,
    ) -> Result<Self> {
        let n = fan.rank;
        if n == 0 || n > MAX_RANK {
            return Err(Error::TooLarge(format!("rank {n} outside 1..={MAX_RANK}")));
        }
        if !fan.complete {
            return Err(Error::InvalidInput("thresholds need a complete fan".into()));
        }
        if terms.is_empty() {
            return Err(Error::InvalidInput("at least one term is required".into()));
        }
        if terms.len() > MAX_TERMS {
            return Err(Error::TooLarge(format!("{} terms exceed the cap of {MAX_TERMS}", terms.len())));
        }
        if boundary.coefficients.len() != fan.rays.len() {
            return Err(Error::DimensionMismatch { expected: fan.rays.len(), found: boundary.coefficients.len() });
        }
        for (i, (c, l)) in terms.iter().enumerate() {
            if !c.is_positive() {
                return Err(Error::InvalidInput(format!("weight of term {i} is not positive")));
            }
            if *l.fan != *fan {
                return Err(Error::InvalidInput(format!("term {i} lives on a different fan")));
            }
            l.moment_data()?;
        }
        for (i, f) in flags.iter().enumerate() {
            if f.fans[0] != *fan {
                return Err(Error::InvalidInput(format!("flag {i} lives on a different fan")));
            }
        }
        let mut cands = candidates;
        if cands.is_empty() {
            cands.extend(fan.rays.iter().cloned());
            cands.extend(flags.iter().map(|f| f.first_vector().clone()));
        }
        let mut seen = Vec::new();
        for v in cands {
            if v.rank() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.rank() });
            }
            if v.is_zero() {
                return Err(Error::ZeroVector);
            }
            if !v.is_primitive() {
                return Err(Error::NotPrimitive(v.to_string()));
            }
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        Ok(CoupledProblem { fan, boundary, terms, candidates: seen, flags })
    }

    pub fn with_weights(&self, weights: &[Rat]) -> Result<Self> {
        if weights.len() != self.terms.len() {
            return Err(Error::DimensionMismatch { expected: self.terms.len(), found: weights.len() });
        }
        let terms = self.terms.iter().zip(weights).map(|((_, l), c)| (c.clone(), l.clone())).collect();
        Self::new(self.fan.clone(), self.boundary.clone(), terms, self.candidates.clone(), self.flags.clone())
    }

    pub fn with_terms(&self, terms: Vec<(Rat, ToricDivisor)>) -> Result<Self> {
        Self::new(self.fan.clone(), self.boundary.clone(), terms, self.candidates.clone(), self.flags.clone())
    }

    fn weighted(&self, per_term: &[Rat]) -> Rat {
        self.terms.iter().zip(per_term).fold(Rat::zero(), |acc, ((c, _), s)| acc + c * s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateRow {
    pub vector: LatticeVector,
    pub a: Rat,
    pub s: Vec<Rat>,
    pub t: Vec<Rat>,
    /// `A / Σ c_i S_i`.
    pub delta_ratio: Rat,
    /// `A / Σ c_i T_i`.
    pub alpha_ratio: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagLevel {
    pub a: Rat,
    pub s: Vec<Rat>,
    pub ratio: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagRow {
    pub vectors: Vec<LatticeVector>,
    /// Maximal cone `τ_0` of the flag, i.e. the fixed point it passes through.
    pub tau0: usize,
    pub levels: Vec<FlagLevel>,
    pub az_bound: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdReport {
    /// Restricted to the supplied candidates: an upper bound for δ.
    pub delta_upper: Rat,
    /// Restricted to the supplied candidates: an upper bound for α.
    pub alpha_upper: Rat,
    pub candidates: Vec<CandidateRow>,
    pub flags: Vec<FlagRow>,
    /// Min over maximal cones of the best flag chain bound at that fixed
    /// point; `None` if some fixed point carries no complete flag.
    pub delta_lower: Option<Rat>,
    pub certified: bool,
}

fn candidate_row(p: &CoupledProblem, v: &LatticeVector) -> Result<CandidateRow> {
    let a = log_discrepancy(&p.fan, &p.boundary, &v.to_rats())?;
    let (s, t): (Vec<Rat>, Vec<Rat>) =
        p.terms.iter().map(|(_, l)| s_t_invariants(l, v)).collect::<Result<Vec<_>>>()?.into_iter().unzip();
    let delta_ratio = &a / p.weighted(&s);
    let alpha_ratio = &a / p.weighted(&t);
    Ok(CandidateRow { vector: v.clone(), a, s, t, delta_ratio, alpha_ratio })
}

fn flag_row(p: &CoupledProblem, flag: &FlagChain) -> Result<FlagRow> {
    if !flag.is_complete() {
        return Err(Error::IncompleteFlag { depth: flag.depth, rank: flag.rank });
    }
    let a = flag_log_discrepancies(&p.boundary, flag)?;
    let per_term: Vec<Vec<Rat>> = p.terms.iter().map(|(_, l)| flag_s_invariants(l, flag)).collect::<Result<_>>()?;
    let levels: Vec<FlagLevel> = (0..flag.rank)
        .map(|j| {
            let s: Vec<Rat> = per_term.iter().map(|v| v[j].clone()).collect();
            let ratio = &a[j] / p.weighted(&s);
            FlagLevel { a: a[j].clone(), s, ratio }
        })
        .collect();
    let az_bound = levels.iter().map(|l| l.ratio.clone()).min().expect("rank ≥ 1");
    Ok(FlagRow { vectors: flag.vectors.clone(), tau0: flag.tau[0], levels, az_bound })
}

/// `min_j A_j / Σ_i c_i S(L_i; Y_1 ▷ … ▷ Y_j)` along a complete flag.
pub fn az_flag_bound(p: &CoupledProblem, flag: &FlagChain) -> Result<Rat> {
    if flag.fans[0] != *p.fan {
        return Err(Error::InvalidInput("flag lives on a different fan".into()));
    }
    Ok(flag_row(p, flag)?.az_bound)
}

pub fn coupled_thresholds(p: &CoupledProblem) -> Result<ThresholdReport> {
    let candidates: Vec<CandidateRow> = p.candidates.iter().map(|v| candidate_row(p, v)).collect::<Result<_>>()?;
    let delta_upper = candidates.iter().map(|r| r.delta_ratio.clone()).min().ok_or_else(|| {
        Error::InvalidInput("candidate list is empty".into())
    })?;
    let alpha_upper = candidates.iter().map(|r| r.alpha_ratio.clone()).min().expect("nonempty");
    let n1 = Rat::from_integer((p.fan.rank + 1).into());
    if alpha_upper > delta_upper || delta_upper > &n1 * &alpha_upper {
        return Err(Error::Internal("α/δ candidate bounds are inconsistent".into()));
    }
    let flags: Vec<FlagRow> = p.flags.iter().map(|f| flag_row(p, f)).collect::<Result<_>>()?;
    let delta_lower = (0..p.fan.cones.len())
        .filter(|&c| p.fan.is_full_dim_cone(c))
        .map(|c| flags.iter().filter(|r| r.tau0 == c).map(|r| r.az_bound.clone()).max())
        .collect::<Option<Vec<Rat>>>()
        .and_then(|v| v.into_iter().min());
    let certified = delta_lower.as_ref().is_some_and(|l| *l >= delta_upper);
    Ok(ThresholdReport { delta_upper, alpha_upper, candidates, flags, delta_lower, certified })
}

/// Every ordering of the rays of every maximal cone, as ambient flags.
pub fn fixed_point_flags(fan: &Fan) -> Result<Vec<FlagChain>> {
    let mut out = Vec::new();
    for c in 0..fan.cones.len() {
        if !fan.is_full_dim_cone(c) {
            continue;
        }
        for perm in fan.cones[c].iter().permutations(fan.rank) {
            let vs: Vec<LatticeVector> = perm.iter().map(|&&r| fan.rays[r].clone()).collect();
            out.push(build_flag_chain(fan, &vs, FlagFrame::Ambient)?);
        }
    }
    Ok(out)
}

/// Intersection numbers `D_ρ · D_σ` on a complete simplicial toric surface.
pub fn intersection_matrix(fan: &Fan) -> Result<Matrix> {
    if fan.rank != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: fan.rank });
    }
    if !fan.complete {
        return Err(Error::InvalidInput("intersection numbers need a complete fan".into()));
    }
    let r = fan.rays.len();
    let mut m = linalg::zeros(r, r);
    for (c, cone) in fan.cones.iter().enumerate() {
        if cone.len() == 2 {
            let x = Rat::one() / from_int(&fan.cone_multiplicity(c));
            m[cone[0]][cone[1]] = x.clone();
            m[cone[1]][cone[0]] = x;
        }
    }
    for i in 0..r {
        let vi = fan.rays[i].to_rats();
        let norm = linalg::dot(&vi, &vi);
        let s = (0..r)
            .filter(|&j| j != i)
            .fold(Rat::zero(), |acc, j| acc + fan.rays[j].pair(&vi) * &m[j][i]);
        m[i][i] = -s / norm;
    }
    Ok(m)
}

fn pairing(m: &Matrix, a: &[Rat], b: &[Rat]) -> Rat {
    linalg::dot(a, &linalg::mat_vec(m, b))
}

#[derive(Clone, Debug)]
pub struct ZariskiDecomposition {
    pub negative: ToricDivisor,
    pub positive: ToricDivisor,
}

/// `D = N + P` on a complete toric surface, with `a'_ρ = −min_{P_D} ⟨u, v_ρ⟩`.
pub fn zariski_surface(fan: &Fan, d: &ToricDivisor) -> Result<ZariskiDecomposition> {
    if *d.fan != *fan {
        return Err(Error::InvalidInput("divisor lives on a different fan".into()));
    }
    let im = intersection_matrix(fan)?;
    let md = d.moment_data()?;
    let pc: Vec<Rat> = fan
        .rays
        .iter()
        .map(|r| -md.polytope.min_linear(&r.to_rats()).expect("nonempty"))
        .collect();
    let positive = ToricDivisor::new(d.fan.clone(), pc)?;
    let negative = ToricDivisor::new(d.fan.clone(), linalg::sub(&d.coefficients, &positive.coefficients))?;
    if negative.coefficients.iter().any(Signed::is_negative) {
        return Err(Error::Internal("negative part has a negative coefficient".into()));
    }
    for i in 0..fan.rays.len() {
        let e: Vec<Rat> = (0..fan.rays.len()).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect();
        if pairing(&im, &positive.coefficients, &e).is_negative() {
            return Err(Error::Internal(format!("positive part is negative on ray {i}")));
        }
    }
    if positive.moment_data()?.polytope.vertices != md.polytope.vertices {
        return Err(Error::Internal("positive part changed the moment polytope".into()));
    }
    Ok(ZariskiDecomposition { negative, positive })
}

/// Lattice points of `m·P_D` and `m·P_P` coincide, i.e. sections of `mD`
/// are those of `mP` shifted by `mN`.
pub fn h0_matches(d: &ToricDivisor, z: &ZariskiDecomposition, m: u32) -> Result<bool> {
    let scale = Rat::from_integer(m.into());
    let a = lattice_points_2d(&d.scaled(&scale))?;
    let b = lattice_points_2d(&z.positive.scaled(&scale))?;
    Ok(a == b)
}

fn lattice_points_2d(d: &ToricDivisor) -> Result<Vec<(Rat, Rat)>> {
    let p = &d.moment_data()?.polytope;
    let range = |i: usize| {
        let lo = p.vertices.iter().map(|v| v[i].clone()).min().expect("nonempty").ceil();
        let hi = p.vertices.iter().map(|v| v[i].clone()).max().expect("nonempty").floor();
        (lo.to_integer(), hi.to_integer())
    };
    let ((x0, x1), (y0, y1)) = (range(0), range(1));
    let mut out = Vec::new();
    let mut x = x0;
    while x <= x1 {
        let mut y = y0.clone();
        while y <= y1 {
            let u = vec![from_int(&x), from_int(&y)];
            if p.contains(&u) {
                out.push((u[0].clone(), u[1].clone()));
            }
            y += 1;
        }
        x += 1;
    }
    Ok(out)
}

/// One interval of the path: coefficient functions are linear in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiPiece {
    pub lo: Rat,
    pub hi: Rat,
    pub positive: Vec<Polynomial>,
    pub negative: Vec<Polynomial>,
    /// `P(x) · E`.
    pub p_dot_e: Polynomial,
}

/// Zariski decompositions of `σ*L − xE` for `x ∈ [u₁, t₁]` on the star
/// subdivision at `E`.
#[derive(Clone, Debug)]
pub struct ZariskiPath {
    pub fan: Arc<Fan>,
    pub pullback: ToricDivisor,
    pub e: usize,
    pub u1: Rat,
    pub t1: Rat,
    /// `vol_X(L) = (P²)` for the positive part `P` of `L`.
    pub volume: Rat,
    pub breakpoints: Vec<Rat>,
    pub pieces: Vec<ZariskiPiece>,
}

impl ZariskiPath {
    /// `S(L; E) = (2/vol) ∫ x (P(x)·E) dx`.
    pub fn s1(&self) -> Rat {
        let two = Rat::from_integer(2.into());
        let s = self.pieces.iter().fold(Rat::zero(), |acc, p| acc + p.p_dot_e.mul_x().integrate(&p.lo, &p.hi));
        two * s / &self.volume
    }
}

pub fn zariski_path(l: &ToricDivisor, e_vec: &LatticeVector) -> Result<ZariskiPath> {
    let fan0 = &*l.fan;
    if fan0.rank != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: fan0.rank });
    }
    let md = l.moment_data()?;
    let sub = crate::fan::star_subdivide(fan0, e_vec)?;
    let e = sub.ray;
    let fan = Arc::new(sub.fan);
    let ve = fan.rays[e].to_rats();
    let ae = l.support_value(&ve)?;
    let mut coeffs = l.coefficients.clone();
    if coeffs.len() < fan.rays.len() {
        coeffs.push(ae.clone());
    }
    let pullback = ToricDivisor::new(fan.clone(), coeffs)?;
    let im = intersection_matrix(&fan)?;
    let pos = zariski_surface(&fan, &pullback)?.positive;
    let volume = pairing(&im, &pos.coefficients, &pos.coefficients);
    if volume != Rat::from_integer(2.into()) * md.volume() {
        return Err(Error::Internal("(P²) disagrees with the moment polytope volume".into()));
    }
    let u1 = &ae + md.polytope.min_linear(&ve).expect("nonempty");
    let t1 = &ae + md.polytope.max_linear(&ve).expect("nonempty");

    let mut bps = vec![u1.clone(), t1.clone()];
    let others: Vec<usize> = (0..fan.rays.len()).filter(|&r| r != e).collect();
    for (&i, &j) in others.iter().tuple_combinations() {
        let rows = vec![fan.rays[i].to_rats(), fan.rays[j].to_rats()];
        let rhs = vec![-pullback.coefficients[i].clone(), -pullback.coefficients[j].clone()];
        if let Some(pt) = linalg::solve_square(&rows, &rhs) {
            let x = &ae + linalg::dot(&pt, &ve);
            if x > u1 && x < t1 {
                bps.push(x);
            }
        }
    }
    bps.sort();
    bps.dedup();

    let at = |x: &Rat| -> Result<ZariskiDecomposition> {
        let mut c = pullback.coefficients.clone();
        c[e] -= x;
        zariski_surface(&fan, &ToricDivisor::new(fan.clone(), c)?)
    };
    let unit_e: Vec<Rat> = (0..fan.rays.len()).map(|j| if j == e { Rat::one() } else { Rat::zero() }).collect();
    let mut pieces = Vec::new();
    for w in bps.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let h = hi - lo;
        let xs = [lo + &h / Rat::from_integer(3.into()), lo + &h * Rat::new(2.into(), 3.into())];
        let z = [at(&xs[0])?, at(&xs[1])?];
        let lin = |f: &dyn Fn(&ZariskiDecomposition) -> &Vec<Rat>, r: usize| {
            Polynomial::interpolate(&xs, &[f(&z[0])[r].clone(), f(&z[1])[r].clone()])
        };
        let positive: Vec<Polynomial> =
            (0..fan.rays.len()).map(|r| lin(&|d| &d.positive.coefficients, r)).collect::<Result<_>>()?;
        let negative: Vec<Polynomial> =
            (0..fan.rays.len()).map(|r| lin(&|d| &d.negative.coefficients, r)).collect::<Result<_>>()?;
        let mid = (lo + hi) / Rat::from_integer(2.into());
        let zm = at(&mid)?;
        if positive.iter().zip(&zm.positive.coefficients).any(|(p, c)| p.eval(&mid) != *c) {
            return Err(Error::Internal("positive part is not linear on a path interval".into()));
        }
        if !negative[e].coeffs.is_empty() {
            return Err(Error::Internal("negative part contains the exceptional curve".into()));
        }
        for x in [lo, hi] {
            let pv: Vec<Rat> = positive.iter().map(|p| p.eval(x)).collect();
            if negative.iter().any(|p| p.eval(x).is_negative()) {
                return Err(Error::Internal("negative part fails to be effective on an interval".into()));
            }
            for r in 0..fan.rays.len() {
                let er: Vec<Rat> = (0..fan.rays.len()).map(|j| if j == r { Rat::one() } else { Rat::zero() }).collect();
                if pairing(&im, &pv, &er).is_negative() {
                    return Err(Error::Internal("positive part fails to be nef on an interval".into()));
                }
            }
        }
        let col = linalg::mat_vec(&im, &unit_e);
        let p_dot_e = positive
            .iter()
            .zip(&col)
            .fold(Polynomial::default(), |acc, (p, c)| acc.add(&p.scale(c)));
        pieces.push(ZariskiPiece { lo: lo.clone(), hi: hi.clone(), positive, negative, p_dot_e });
    }
    Ok(ZariskiPath { fan, pullback, e, u1, t1, volume, breakpoints: bps, pieces })
}

/// `(S(L; Y₁), S(L; Y₁ ▷ Y₂))` by integrating along the Zariski path.
pub fn s_via_surface_zariski(fan: &Fan, l: &ToricDivisor, flag: &FlagChain) -> Result<(Rat, Rat)> {
    if *l.fan != *fan || flag.fans[0] != *fan {
        return Err(Error::InvalidInput("divisor, flag and fan disagree".into()));
    }
    if fan.rank != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: fan.rank });
    }
    if !flag.is_complete() {
        return Err(Error::IncompleteFlag { depth: flag.depth, rank: flag.rank });
    }
    let path = zariski_path(l, flag.first_vector())?;
    let sub = &flag.subdivisions[0];
    if *path.fan != sub.fan || path.e != sub.ray {
        return Err(Error::Internal("flag subdivision differs from the path subdivision".into()));
    }
    let g = flag.gamma[0];
    let w = *sub.fan.cones[g]
        .iter()
        .find(|&&r| r != sub.ray)
        .ok_or_else(|| Error::Internal("γ₀ has no second ray".into()))?;
    let mult = from_int(&sub.fan.cone_multiplicity(g));
    let half = Rat::new(1.into(), 2.into());
    let mut s2 = Rat::zero();
    for p in &path.pieces {
        let ord = p.negative[w].scale(&(Rat::one() / &mult));
        let integrand = p.p_dot_e.mul(&p.p_dot_e.scale(&half).add(&ord));
        s2 += integrand.integrate(&p.lo, &p.hi);
    }
    let two = Rat::from_integer(2.into());
    Ok((path.s1(), two * s2 / &path.volume))
}

/// `δ_η(P¹, b·η; {c_i L_i}) = 2(1 − b) / Σ c_i d_i`.
pub fn curve_delta(b: &Rat, terms: &[(Rat, Rat)]) -> Result<Rat> {
    if b.is_negative() || *b >= Rat::one() {
        return Err(Error::InvalidInput(format!("boundary coefficient {} outside [0, 1)", format_rational(b))));
    }
    if terms.is_empty() {
        return Err(Error::InvalidInput("at least one term is required".into()));
    }
    let mut s = Rat::zero();
    for (c, d) in terms {
        if !c.is_positive() {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        if !d.is_positive() {
            return Err(Error::NotBig);
        }
        s += c * d;
    }
    Ok(Rat::from_integer(2.into()) * (Rat::one() - b) / s)
}

/// `(P¹, b·V(1))` with terms `c_i · d_i V(1)`.
pub fn curve_problem(b: &Rat, terms: &[(Rat, Rat)]) -> Result<CoupledProblem> {
    let fan = Arc::new(crate::corpus::p1());
    let boundary = BoundaryData::new(&fan, vec![b.clone(), Rat::zero()])?;
    let ts = terms
        .iter()
        .map(|(c, d)| Ok((c.clone(), ToricDivisor::new(fan.clone(), vec![d.clone(), Rat::zero()])?)))
        .collect::<Result<_>>()?;
    let flags = fixed_point_flags(&fan)?;
    CoupledProblem::new(fan, boundary, ts, Vec::new(), flags)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HirzebruchOracle {
    pub p: Vec<Rat>,
    pub q: Vec<Rat>,
    pub delta: Rat,
}

/// Closed forms for `F_m` with terms `c_i (a_i E + b_i F)`.
pub fn hirzebruch_oracle(m: u32, terms: &[(Rat, Rat, Rat)]) -> Result<HirzebruchOracle> {
    if terms.is_empty() {
        return Err(Error::InvalidInput("at least one term is required".into()));
    }
    let mr = Rat::from_integer(m.into());
    let three = Rat::from_integer(3.into());
    let (mut p, mut q) = (Vec::new(), Vec::new());
    for (c, a, b) in terms {
        if !c.is_positive() {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        if !a.is_positive() || !b.is_positive() {
            return Err(Error::NotBig);
        }
        if m == 0 {
            p.push(a / Rat::from_integer(2.into()));
            q.push(b / Rat::from_integer(2.into()));
        } else if &mr * a >= *b {
            p.push(a - b / (&three * &mr));
            q.push(b / &three);
        } else {
            let den = &three * (Rat::from_integer(2.into()) * b - &mr * a);
            p.push(a * (&three * b - &mr * a) / &den);
            q.push((&three * b * b - &three * &mr * a * b + &mr * &mr * a * a) / &den);
        }
    }
    let sp = terms.iter().zip(&p).fold(Rat::zero(), |acc, ((c, _, _), x)| acc + c * x);
    let sq = terms.iter().zip(&q).fold(Rat::zero(), |acc, ((c, _, _), x)| acc + c * x);
    let delta = (Rat::one() / sp).min(Rat::one() / sq);
    Ok(HirzebruchOracle { p, q, delta })
}

/// `F_m` with `B = 0`, terms `c_i (a_i E + b_i F)` and every fixed-point flag.
pub fn hirzebruch_problem(m: u32, terms: &[(Rat, Rat, Rat)]) -> Result<CoupledProblem> {
    let fan = Arc::new(crate::corpus::hirzebruch(m.into()));
    let ts = terms
        .iter()
        .map(|(c, a, b)| {
            let coeffs = vec![b.clone(), a.clone(), Rat::zero(), Rat::zero()];
            Ok((c.clone(), ToricDivisor::new(fan.clone(), coeffs)?))
        })
        .collect::<Result<_>>()?;
    let flags = fixed_point_flags(&fan)?;
    CoupledProblem::new(fan.clone(), BoundaryData::zero(&fan), ts, Vec::new(), flags)
}

/// Rays `(v, 0) ∪ (0, w)`; maximal cones are products of maximal cones.
pub fn product_fan(f1: &Fan, f2: &Fan) -> Result<Fan> {
    let (n1, n2) = (f1.rank, f2.rank);
    let mut rays = Vec::new();
    for r in &f1.rays {
        let mut c = r.coords().to_vec();
        c.extend(std::iter::repeat_with(Zero::zero).take(n2));
        rays.push(LatticeVector::new(c));
    }
    for r in &f2.rays {
        let mut c: Vec<_> = std::iter::repeat_with(Zero::zero).take(n1).collect();
        c.extend(r.coords().iter().cloned());
        rays.push(LatticeVector::new(c));
    }
    let off = f1.rays.len();
    let max1: Vec<usize> = (0..f1.cones.len()).filter(|&c| f1.is_full_dim_cone(c)).collect();
    let max2: Vec<usize> = (0..f2.cones.len()).filter(|&c| f2.is_full_dim_cone(c)).collect();
    let cones = max1
        .iter()
        .cartesian_product(&max2)
        .map(|(&a, &b)| f1.cones[a].iter().copied().chain(f2.cones[b].iter().map(|r| r + off)).collect())
        .collect();
    Fan::new(n1 + n2, rays, cones)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCheck {
    pub lhs: Rat,
    pub rhs: Rat,
    pub factors: (Rat, Rat),
    pub equal: bool,
}

/// δ of the product problem against the min of the factor values.
pub fn product_check(p1: &CoupledProblem, p2: &CoupledProblem) -> Result<ProductCheck> {
    if p1.terms.len() != p2.terms.len() {
        return Err(Error::InvalidInput("factors have different numbers of terms".into()));
    }
    if p1.terms.iter().zip(&p2.terms).any(|(a, b)| a.0 != b.0) {
        return Err(Error::InvalidInput("factors have different weights".into()));
    }
    let fan = Arc::new(product_fan(&p1.fan, &p2.fan)?);
    let mut bc = p1.boundary.coefficients.clone();
    bc.extend(p2.boundary.coefficients.iter().cloned());
    let boundary = BoundaryData::new(&fan, bc)?;
    let terms = p1
        .terms
        .iter()
        .zip(&p2.terms)
        .map(|((c, l1), (_, l2))| {
            let mut a = l1.coefficients.clone();
            a.extend(l2.coefficients.iter().cloned());
            Ok((c.clone(), ToricDivisor::new(fan.clone(), a)?))
        })
        .collect::<Result<_>>()?;
    let (n1, n2) = (p1.fan.rank, p2.fan.rank);
    let mut candidates = Vec::new();
    for v in &p1.candidates {
        let mut c = v.coords().to_vec();
        c.extend(std::iter::repeat_with(Zero::zero).take(n2));
        candidates.push(LatticeVector::new(c));
    }
    for w in &p2.candidates {
        let mut c: Vec<_> = std::iter::repeat_with(Zero::zero).take(n1).collect();
        c.extend(w.coords().iter().cloned());
        candidates.push(LatticeVector::new(c));
    }
    let prod = CoupledProblem::new(fan, boundary, terms, candidates, Vec::new())?;
    let lhs = coupled_thresholds(&prod)?.delta_upper;
    let d1 = coupled_thresholds(p1)?.delta_upper;
    let d2 = coupled_thresholds(p2)?.delta_upper;
    let rhs = d1.clone().min(d2.clone());
    Ok(ProductCheck { equal: lhs == rhs, lhs, rhs, factors: (d1, d2) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseCheck {
    /// `c'_j` with `L_j ≡ c'_j L_1`.
    pub ratios: Vec<Rat>,
    pub single_delta: Rat,
    pub predicted: Rat,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalingReport {
    pub c: Rat,
    pub delta: Rat,
    pub scaled_delta: Rat,
    pub scaling_holds: bool,
    /// Present when all terms are proportional to one class.
    pub collapse: Option<CollapseCheck>,
}

/// `c'` with `L ≡ c'·L₁` modulo principal divisors, if it exists.
pub fn proportionality(l1: &ToricDivisor, l: &ToricDivisor) -> Option<Rat> {
    let fan = &l1.fan;
    let n = fan.rank;
    let a: Matrix = fan
        .rays
        .iter()
        .zip(&l1.coefficients)
        .map(|(r, a1)| {
            let mut row = vec![a1.clone()];
            row.extend(r.to_rats());
            row
        })
        .collect();
    let sol = linalg::solve(&a, &l.coefficients)?;
    debug_assert_eq!(sol.len(), n + 1);
    Some(sol[0].clone())
}

pub fn threshold_scaling_suite(p: &CoupledProblem, c: &Rat) -> Result<ScalingReport> {
    if !c.is_positive() {
        return Err(Error::InvalidInput("scale must be positive".into()));
    }
    let delta = coupled_thresholds(p)?.delta_upper;
    let weights: Vec<Rat> = p.terms.iter().map(|(w, _)| w * c).collect();
    let scaled_delta = coupled_thresholds(&p.with_weights(&weights)?)?.delta_upper;
    let scaling_holds = scaled_delta == &delta / c;
    let l1 = &p.terms[0].1;
    let ratios: Option<Vec<Rat>> = p.terms.iter().map(|(_, l)| proportionality(l1, l)).collect();
    let collapse = match ratios {
        Some(ratios) => {
            let single = p.with_terms(vec![(Rat::one(), l1.clone())])?;
            let single_delta = coupled_thresholds(&single)?.delta_upper;
            let sum = p.weighted(&ratios);
            let predicted = &single_delta / sum;
            Some(CollapseCheck { holds: predicted == delta, ratios, single_delta, predicted })
        }
        None => None,
    };
    Ok(ScalingReport { c: c.clone(), delta, scaled_delta, scaling_holds, collapse })
}
