//! One-sided bounds on the first barycenter coordinate of a convex body
//! from its slice-volume function, and the closed-form line bound.
//!
//! Roots are enclosed in rational intervals with dyadic endpoints. Lower
//! bounds should be read from `lo`, upper bounds from `hi`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, format_rational, from_int, Rat};
use crate::poly::{PiecewisePolynomial, Polynomial};
use crate::polytope::SliceProfile;

pub const DEFAULT_PRECISION: u32 = 128;
const GUARD_BITS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn exact(r: Rat) -> Self {
        Interval { lo: r.clone(), hi: r }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, r: &Rat) -> bool {
        &self.lo <= r && r <= &self.hi
    }

    pub fn overlaps(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    /// `"rational"` or `"interval[lo,hi]"`.
    pub fn exactness(&self) -> String {
        if self.is_exact() {
            "rational".into()
        } else {
            format!("interval[{},{}]", format_rational(&self.lo), format_rational(&self.hi))
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn add_rat(&self, r: &Rat) -> Interval {
        Interval { lo: &self.lo + r, hi: &self.hi + r }
    }

    pub fn scale(&self, r: &Rat) -> Interval {
        if r.is_negative() {
            Interval { lo: &self.hi * r, hi: &self.lo * r }
        } else {
            Interval { lo: &self.lo * r, hi: &self.hi * r }
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        Interval {
            lo: p.iter().min().expect("four").clone(),
            hi: p.iter().max().expect("four").clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Interval {
        if !self.lo.is_negative() {
            return Interval { lo: pow_rat(&self.lo, e), hi: pow_rat(&self.hi, e) };
        }
        (0..e).fold(Interval::exact(Rat::one()), |acc, _| acc.mul(self))
    }

    /// Endpoints moved outward onto the grid `2^{-bits}`.
    pub fn round_outward(&self, bits: u32) -> Interval {
        if self.is_exact() {
            return self.clone();
        }
        let s = Rat::from_integer(BigInt::one() << bits);
        Interval { lo: (&self.lo * &s).floor() / &s, hi: (&self.hi * &s).ceil() / &s }
    }
}

fn pow_rat(r: &Rat, e: u32) -> Rat {
    (0..e).fold(Rat::one(), |acc, _| acc * r)
}

fn ri(n: usize) -> Rat {
    Rat::from_integer(n.into())
}

/// Enclosure of `r^{1/n}` for `r ≥ 0`; exact when `r` is a perfect power.
pub fn nth_root(r: &Rat, n: u32, bits: u32) -> Result<Interval> {
    if r.is_negative() {
        return Err(Error::DegenerateSlice(format!("root of negative radicand {}", format_rational(r))));
    }
    if n == 1 {
        return Ok(Interval::exact(r.clone()));
    }
    let (p, q) = (r.numer(), r.denom());
    let (rp, rq) = (p.nth_root(n), q.nth_root(n));
    if rp.pow(n) == *p && rq.pow(n) == *q {
        return Ok(Interval::exact(Rat::new(rp, rq)));
    }
    let scaled = (p << (n as usize * bits as usize)) / q;
    let root = scaled.nth_root(n);
    let den = BigInt::one() << bits;
    Ok(Interval { lo: Rat::new(root.clone(), den.clone()), hi: Rat::new(root + 1, den) })
}

/// Slice data of a convex body along the first coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaryProfile {
    pub n: usize,
    pub t0: Rat,
    pub t1: Rat,
    pub volume: Rat,
    /// Defined at least on `[t0, e]`.
    pub g: PiecewisePolynomial,
    pub e: Rat,
    pub v: Rat,
    pub t: Option<Rat>,
    pub u: Option<Rat>,
    pub w: Option<Rat>,
}

impl BaryProfile {
    pub fn new(n: usize, t0: Rat, t1: Rat, volume: Rat, g: PiecewisePolynomial, e: Rat, v: Rat) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("barycenter bounds need n ≥ 2".into()));
        }
        if t0 >= t1 {
            return Err(Error::InvalidInput("t0 must be below t1".into()));
        }
        if !volume.is_positive() {
            return Err(Error::InvalidInput("volume must be positive".into()));
        }
        if e <= t0 || e >= t1 {
            return Err(Error::InvalidInput(format!("e = {} outside (t0, t1)", format_rational(&e))));
        }
        if *g.start() != t0 || *g.end() < e {
            return Err(Error::InvalidInput("slice function must start at t0 and reach e".into()));
        }
        if *g.end() == t1 && g.integral() != volume {
            return Err(Error::InvalidInput("slice function does not integrate to the volume".into()));
        }
        let p = BaryProfile { n, t0, t1, volume, g, e, v, t: None, u: None, w: None };
        if !p.ge().is_positive() {
            return Err(Error::DegenerateSlice(format!("g(e) = {} is not positive", format_rational(&p.ge()))));
        }
        Ok(p)
    }

    /// From an exact slice profile; `right` selects the one-sided slope at `e`.
    pub fn from_slice_profile(sp: &SliceProfile, n: usize, e: Rat, right: bool) -> Result<Self> {
        let v = sp
            .g
            .one_sided_derivative(&e, right)
            .ok_or_else(|| Error::InvalidInput("e outside the slice range".into()))?;
        Self::new(n, sp.t0.clone(), sp.t1.clone(), sp.volume.clone(), sp.g.clone(), e, v)
    }

    pub fn with_t(mut self, t: Rat) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_u_w(mut self, u: Rat, w: Rat) -> Self {
        self.u = Some(u);
        self.w = Some(w);
        self
    }

    fn ge(&self) -> Rat {
        self.g.eval(&self.e)
    }

    fn mass_before(&self) -> Rat {
        self.g.moment(&self.t0, &self.e, 0)
    }

    fn moment_before(&self) -> Rat {
        self.g.moment(&self.t0, &self.e, 1)
    }

    /// `V − ∫_{t0}^e g`.
    fn remaining(&self) -> Rat {
        &self.volume - self.mass_before()
    }

    /// `k = (n−1) g(e) / v`, the scale of the envelope parameter.
    fn k(&self) -> Rat {
        ri(self.n - 1) * self.ge() / &self.v
    }

    /// `v(x−e)/((n−1)g(e)) + 1`.
    fn phi(&self, x: &Rat) -> Rat {
        &self.v * (x - &self.e) / (ri(self.n - 1) * self.ge()) + Rat::one()
    }

    /// The power envelope `h₀` on `[e, t1]`, `g` before `e`.
    pub fn h0(&self, x: &Rat) -> Rat {
        if x <= &self.e {
            return self.g.eval(x);
        }
        self.ge() * pow_rat(&self.phi(x), (self.n - 1) as u32)
    }

    /// `∫_e^s x h₀` with `s = e + k(ρ−1)`, for `v ≠ 0`.
    fn env_moment_rho(&self, rho: &Interval) -> Interval {
        let n = self.n as u32;
        let k = self.k();
        let one = Rat::one();
        let a = rho.pow(n).add_rat(&-one.clone()).scale(&((&self.e - &k) / ri(self.n)));
        let b = rho.pow(n + 1).add_rat(&-one).scale(&(&k / ri(self.n + 1)));
        a.add(&b).scale(&(self.ge() * k))
    }

    fn env_moment_flat(&self, s: &Interval) -> Interval {
        s.pow(2).add_rat(&-(&self.e * &self.e)).scale(&(self.ge() / ri(2)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    /// `s₀` or `s₁`.
    pub point: Interval,
    pub bound: Interval,
}

/// `b₁ ≥ (1/V) ∫_{t0}^{s₀} x h₀`.
pub fn lower_bound_s0(p: &BaryProfile, bits: u32) -> Result<BoundResult> {
    let r = p.remaining();
    let ge = p.ge();
    let me = p.moment_before();
    let (point, moment) = if p.v.is_zero() {
        let s = Interval::exact(&p.e + &r / &ge);
        (s.clone(), p.env_moment_flat(&s))
    } else {
        let rad = Rat::one() + ri(p.n) * &p.v * &r / (ri(p.n - 1) * &ge * &ge);
        if rad.is_negative() {
            return Err(Error::DegenerateSlice("power envelope has too little mass".into()));
        }
        let rho = nth_root(&rad, p.n as u32, bits + GUARD_BITS)?;
        let s = rho.add_rat(&-Rat::one()).scale(&p.k()).add_rat(&p.e);
        (s, p.env_moment_rho(&rho))
    };
    let bound = moment.add_rat(&me).scale(&(Rat::one() / &p.volume));
    Ok(BoundResult { point: point.round_outward(bits), bound: bound.round_outward(bits) })
}

/// `W = ∫_{t0}^t h₀`, exact.
pub fn w_value(p: &BaryProfile, t: &Rat) -> Rat {
    let ge = p.ge();
    let extra = if p.v.is_zero() {
        (t - &p.e) * &ge
    } else {
        ri(p.n - 1) * &ge * &ge / (ri(p.n) * &p.v) * (pow_rat(&p.phi(t), p.n as u32) - Rat::one())
    };
    p.mass_before() + extra
}

/// `b₁ ≥ (1/V) ∫_{t0}^t x h₁`.
pub fn lower_bound_h1(p: &BaryProfile, bits: u32) -> Result<BoundResult> {
    let t = p.t.clone().ok_or_else(|| Error::InvalidInput("lower_bound_h1 needs t".into()))?;
    if t <= p.e || t > p.t1 {
        return Err(Error::InvalidInput(format!("t = {} outside (e, t1]", format_rational(&t))));
    }
    let w = w_value(p, &t);
    if w < p.volume {
        return Err(Error::WBelowV { w: format_rational(&w), v: format_rational(&p.volume) });
    }
    let n = p.n;
    let r = p.remaining();
    let ge = p.ge();
    let me = p.moment_before();
    let (s1, h, env) = if w == p.volume {
        // h₁ = h₀ on all of [t0, t]
        let s = Interval::exact(t.clone());
        let env = if p.v.is_zero() { p.env_moment_flat(&s) } else { p.env_moment_rho(&Interval::exact(p.phi(&t))) };
        (s, p.h0(&t), env)
    } else if p.v.is_zero() {
        let s1 = (ri(n) * &r - &ge * (&t - ri(n) * &p.e)) / (ri(n - 1) * &ge);
        let s = Interval::exact(s1);
        let env = p.env_moment_flat(&s);
        (s, ge.clone(), env)
    } else {
        let phit = p.phi(&t);
        if !phit.is_positive() {
            return Err(Error::DegenerateSlice("power envelope vanishes before t".into()));
        }
        let rad = (ri(n) * &p.v * &r + ri(n - 1) * &ge * &ge) / (ri(n - 1) * &ge * &ge * phit);
        let rho = nth_root(&rad, (n - 1) as u32, bits + GUARD_BITS)?;
        let s = rho.add_rat(&-Rat::one()).scale(&p.k()).add_rat(&p.e);
        (s, &ge * rad, p.env_moment_rho(&rho))
    };
    if s1.hi < p.e || s1.lo > t {
        return Err(Error::DegenerateSlice("s₁ falls outside [e, t]".into()));
    }
    let l = s1.scale(&-Rat::one()).add_rat(&t);
    let cone = l.scale(&(&t / ri(n))).sub(&l.pow(2).scale(&(Rat::one() / ri(n + 1)))).scale(&h);
    let bound = env.add(&cone).add_rat(&me).scale(&(Rat::one() / &p.volume));
    Ok(BoundResult { point: s1.round_outward(bits), bound: bound.round_outward(bits) })
}

/// `F(w) = (u−e) Σ g(e)^{i/(n−1)} w^{n−1−i} − n(V − ∫_{t0}^e g)`, with the
/// coefficients rounded outward once.
struct Constraint {
    coeffs: Vec<Interval>,
    width: Rat,
    offset: Rat,
}

impl Constraint {
    fn new(p: &BaryProfile, u: &Rat, gamma: &Interval, bits: u32) -> Self {
        let n = p.n as u32;
        let coeffs = (0..n)
            .map(|i| if i == n - 1 { Interval::exact(p.ge()) } else { gamma.pow(i).round_outward(bits) })
            .collect();
        Constraint { coeffs, width: u - &p.e, offset: ri(p.n) * p.remaining() }
    }

    fn eval(&self, w: &Rat) -> Interval {
        let top = self.coeffs.len() as u32 - 1;
        let mut s = Interval::exact(Rat::zero());
        for (i, gi) in self.coeffs.iter().enumerate() {
            s = s.add(&gi.scale(&pow_rat(w, top - i as u32)));
        }
        s.scale(&self.width).add_rat(&-self.offset.clone())
    }
}

/// Smallest admissible `w` for `u`, enclosed; `hi` satisfies the constraint.
pub fn minimal_w(p: &BaryProfile, u: &Rat, bits: u32) -> Result<Interval> {
    if u <= &p.e {
        return Err(Error::ConstraintViolated("u must exceed e".into()));
    }
    if p.n == 2 {
        return Ok(Interval::exact(ri(2) * p.remaining() / (u - &p.e) - p.ge()).round_outward(bits));
    }
    let gamma = nth_root(&p.ge(), (p.n - 1) as u32, bits + GUARD_BITS)?;
    let f = Constraint::new(p, u, &gamma, bits + GUARD_BITS);
    let mut lo = Rat::zero();
    if !f.eval(&lo).lo.is_negative() {
        return Ok(Interval::exact(lo));
    }
    if p.n == 3 {
        // Root of w² + γw + g(e) − offset/width, using γ² = g(e).
        let disc = ri(4) * &f.offset / &f.width - ri(3) * p.ge();
        if disc.is_positive() {
            let sq = nth_root(&disc, 2, bits + GUARD_BITS)?;
            let lo = ((&sq.lo - &gamma.hi) / ri(2)).max(Rat::zero());
            let w = Interval { lo, hi: (&sq.hi - &gamma.lo) / ri(2) }.round_outward(bits);
            if !f.eval(&w.hi).lo.is_negative() && (w.lo.is_zero() || f.eval(&w.lo).hi.is_negative()) {
                return Ok(w);
            }
        }
    }
    let mut hi = Rat::one();
    while f.eval(&hi).lo.is_negative() {
        hi *= ri(2);
    }
    let steps = bits + 2 * (hi.to_integer().bits() as u32);
    for _ in 0..steps {
        let mid = (&lo + &hi) / ri(2);
        if f.eval(&mid).lo.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Interval { lo, hi })
}

/// `b₁ ≤ (1/V) ∫_{t0}^u x h₂`. Requires `e ≥ 0` so that enlarging `w`
/// cannot decrease the bound.
pub fn upper_bound_h2(p: &BaryProfile, bits: u32) -> Result<Interval> {
    let u = p.u.clone().ok_or_else(|| Error::InvalidInput("upper_bound_h2 needs u".into()))?;
    let w = p.w.clone().ok_or_else(|| Error::InvalidInput("upper_bound_h2 needs w".into()))?;
    let n = p.n;
    let ge = p.ge();
    if u < p.t1 {
        return Err(Error::ConstraintViolated("u must be at least t1".into()));
    }
    if w.is_negative() {
        return Err(Error::ConstraintViolated("w must be nonnegative".into()));
    }
    if p.e.is_negative() {
        return Err(Error::ConstraintViolated("e must be nonnegative".into()));
    }
    if p.mass_before() + (&u - &p.e) * &ge / ri(n) > p.volume {
        return Err(Error::ConstraintViolated("cone below e has more than the total volume".into()));
    }
    let gamma = nth_root(&ge, (n - 1) as u32, bits + GUARD_BITS)?;
    if Constraint::new(p, &u, &gamma, bits + GUARD_BITS).eval(&w).lo.is_negative() {
        return Err(Error::ConstraintViolated(format!(
            "w = {} does not meet the mass constraint",
            format_rational(&w)
        )));
    }
    let m = (n - 1) as u32;
    let beta = |a: u32, b: u32| {
        from_int(&factorial(a as usize)) * from_int(&factorial(b as usize)) / from_int(&factorial((a + b + 1) as usize))
    };
    let ue = &u - &p.e;
    let mut acc = Interval::exact(Rat::zero());
    for i in 0..=m {
        let gpow = if m - i == m { Interval::exact(ge.clone()) } else { gamma.pow(m - i) };
        let binom = from_int(&factorial(m as usize)) / (from_int(&factorial(i as usize)) * from_int(&factorial((m - i) as usize)));
        let coef = &binom * pow_rat(&w, i) * (&p.e * beta(i, m - i) + &ue * beta(i + 1, m - i));
        acc = acc.add(&gpow.scale(&coef));
    }
    let bound = acc.scale(&ue).add_rat(&p.moment_before()).scale(&(Rat::one() / &p.volume));
    Ok(bound.round_outward(bits))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanPoint {
    pub e: Rat,
    pub right: bool,
    pub s0: Interval,
    pub h1: Interval,
}

/// Both lower bounds at `steps − 1` equally spaced interior `e`, for either
/// one-sided slope, with `t = t1`.
pub fn grid_scan(sp: &SliceProfile, n: usize, steps: usize, bits: u32) -> Result<Vec<ScanPoint>> {
    let mut out = Vec::new();
    for i in 1..steps {
        let e = &sp.t0 + (&sp.t1 - &sp.t0) * Rat::new(i.into(), steps.into());
        for right in [false, true] {
            let p = BaryProfile::from_slice_profile(sp, n, e.clone(), right)?.with_t(sp.t1.clone());
            let s0 = lower_bound_s0(&p, bits)?.bound;
            let h1 = lower_bound_h1(&p, bits)?.bound;
            out.push(ScanPoint { e: e.clone(), right, s0, h1 });
        }
    }
    Ok(out)
}

/// `g(x) = ((2−d)x^{n−1} + (n−1)x^{n−2})/(n−1)!` on `[0, 1]` with the rest
/// of the line data: `t0 = 0, t1 = τ, V = V₀/n!, e = 1` and the left slope.
pub fn line_profile(n: usize, d: i64, v0: &Rat, tau: &Rat) -> Result<BaryProfile> {
    if n < 2 {
        return Err(Error::InvalidInput("line bound needs n ≥ 2".into()));
    }
    let mut c = vec![Rat::zero(); n];
    c[n - 1] += Rat::from_integer((2 - d).into());
    c[n - 2] += ri(n - 1);
    let f = from_int(&factorial(n - 1));
    let g = Polynomial::new(c.into_iter().map(|x| x / &f).collect());
    let g = PiecewisePolynomial::new(vec![Rat::zero(), Rat::one()], vec![g])?;
    let v = Rat::from_integer((n as i64 - d).into()) / from_int(&factorial(n - 2));
    BaryProfile::new(n, Rat::zero(), tau.clone(), v0 / from_int(&factorial(n)), g, Rat::one(), v)
}

/// Lower bound for `S(L; E)` on the blowup of a line, checked against the
/// generic `h₁` computation on the same profile.
pub fn line_s_lower_bound(n: usize, d: i64, v0: &Rat, t: &Rat, tau: &Rat, bits: u32) -> Result<Interval> {
    if n < 2 {
        return Err(Error::InvalidInput("n must be at least 2".into()));
    }
    let ni = n as i64;
    if d > ni {
        return Err(Error::InvalidInput("d must not exceed n".into()));
    }
    let rd = |x: i64| Rat::from_integer(x.into());
    if *v0 < rd(ni + 2 - d) {
        return Err(Error::InvalidInput("V₀ must be at least n + 2 − d".into()));
    }
    if *t <= Rat::one() || t > tau {
        return Err(Error::ConstraintViolated("t must satisfy 1 < t ≤ τ".into()));
    }
    let k = rd(ni - d);
    let c = rd(ni + 1 - d);
    let nn = ri(n);
    let w_ok = if d == ni {
        rd(2) + &nn * (t - Rat::one()) >= *v0
    } else {
        Rat::one() + (v0 - rd(ni + 2 - d)) * &k / (&c * &c) <= pow_rat(&((t * &k + Rat::one()) / &c), n as u32)
    };
    if !w_ok {
        let p = line_profile(n, d, v0, tau)?;
        return Err(Error::WBelowV { w: format_rational(&w_value(&p, t)), v: format_rational(&p.volume) });
    }
    if rd(ni + 2 - d) + (t - Rat::one()) * &c > *v0 {
        return Err(Error::ConstraintViolated("s₁ would fall below e = 1".into()));
    }
    let value = if d == ni {
        let a = v0 - rd(2) + &nn - t;
        let inner = &nn / ri(n - 1) * &a * &a + rd(2) * t * &a - ri((n - 1) * (n - 2)) + rd(2) * t * t;
        Interval::exact(inner / (rd(2) * ri(n + 1) * v0))
    } else {
        let kt1 = &k * t + Rat::one();
        let beta = (&k * (v0 - rd(ni + 2 - d)) + &c * &c) / (&c * &kt1);
        let np1 = ri(n + 1);
        let alpha = &c * &c * ri(n - 1) * &kt1 / (&k * &k * &np1);
        let gamma = &c * &kt1 * (&k * t - &nn) / (&k * &k * &np1);
        let kappa = &nn * rd(2 - d) / &np1 + ri(n - 1) + &c * &c / (&k * &k)
            - &nn * &c * &c * &c / (&np1 * &k * &k);
        let root = nth_root(&beta, (n - 1) as u32, bits + GUARD_BITS)?;
        root.scale(&(&alpha * &beta)).add_rat(&(gamma * &beta + kappa)).scale(&(Rat::one() / v0))
    };
    let value = value.round_outward(bits);
    let generic = lower_bound_h1(&line_profile(n, d, v0, tau)?.with_t(t.clone()), bits)?.bound;
    if !value.overlaps(&generic) {
        return Err(Error::Internal(format!(
            "closed form {} disagrees with the h₁ integral {}",
            value.exactness(),
            generic.exactness()
        )));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};
    use crate::polytope::from_vertices;

    fn pts(v: &[(i64, i64)]) -> Vec<Vec<Rat>> {
        v.iter().map(|&(a, b)| vec![rint(a), rint(b)]).collect()
    }

    fn profile(v: &[(i64, i64)], e: Rat, right: bool) -> BaryProfile {
        let p = from_vertices(2, &pts(v)).unwrap();
        BaryProfile::from_slice_profile(&p.slice_profile(0).unwrap(), 2, e, right).unwrap()
    }

    #[test]
    fn roots() {
        assert_eq!(nth_root(&rat(27, 8), 3, 64).unwrap(), Interval::exact(rat(3, 2)));
        let r = nth_root(&rint(2), 2, 64).unwrap();
        assert!(&r.lo * &r.lo < rint(2) && &r.hi * &r.hi > rint(2));
        assert_eq!(&r.hi - &r.lo, Rat::new(1.into(), BigInt::one() << 64));
    }

    #[test]
    fn square() {
        let p = profile(&[(0, 0), (1, 0), (1, 1), (0, 1)], rat(1, 2), false);
        assert!(p.v.is_zero());
        let s0 = lower_bound_s0(&p, 128).unwrap();
        assert_eq!((s0.point, s0.bound), (Interval::exact(rint(1)), Interval::exact(rat(1, 2))));
        let p = p.with_t(rint(1));
        let h1 = lower_bound_h1(&p, 128).unwrap();
        assert_eq!((h1.point, h1.bound), (Interval::exact(rint(1)), Interval::exact(rat(1, 2))));
        let p = p.with_u_w(rint(1), rint(1));
        assert_eq!(upper_bound_h2(&p, 128).unwrap(), Interval::exact(rat(1, 2)));
    }

    #[test]
    fn simplex() {
        let p = profile(&[(0, 0), (1, 0), (0, 1)], rat(1, 2), true);
        assert_eq!(p.v, rint(-1));
        assert_eq!(lower_bound_s0(&p, 128).unwrap().bound, Interval::exact(rat(1, 3)));
        let p = p.with_t(rint(1)).with_u_w(rint(1), rint(0));
        assert_eq!(lower_bound_h1(&p, 128).unwrap().bound, Interval::exact(rat(1, 3)));
        assert_eq!(upper_bound_h2(&p, 128).unwrap(), Interval::exact(rat(1, 3)));
    }

    #[test]
    fn pentagon_sandwich() {
        let verts = [(0, 0), (2, 0), (2, 1), (1, 2), (0, 2)];
        let poly = from_vertices(2, &pts(&verts)).unwrap();
        let b1 = poly.mass().barycenter.unwrap()[0].clone();
        for right in [false, true] {
            let p = profile(&verts, rint(1), right).with_t(rint(2));
            let s0 = lower_bound_s0(&p, 128).unwrap().bound;
            let h1 = lower_bound_h1(&p, 128).unwrap().bound;
            assert!(s0.lo <= h1.hi && h1.hi <= b1);
            // the right slope reproduces g exactly; the left one leaves a gap
            assert_eq!(s0.hi < b1, !right);
            let w = minimal_w(&p, &rint(2), 128).unwrap().hi;
            let p = p.with_u_w(rint(2), w);
            assert!(upper_bound_h2(&p, 128).unwrap().lo >= b1);
        }
    }

    #[test]
    fn three_dimensional_envelope() {
        let p = crate::polytope::from_vertices(
            3,
            &[[0, 0, 0], [2, 0, 0], [0, 2, 0], [0, 0, 2], [1, 1, 1]]
                .iter()
                .map(|v| v.iter().map(|&x| rint(x)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let b1 = p.mass().barycenter.unwrap()[0].clone();
        let sp = p.slice_profile(0).unwrap();
        let pr = BaryProfile::from_slice_profile(&sp, 3, rat(1, 3), true).unwrap().with_t(sp.t1.clone());
        for x in 1..=5 {
            let x = rat(x, 3);
            if x >= pr.e && x <= sp.t1 {
                assert!(pr.h0(&x) >= sp.g.eval(&x));
            }
        }
        let s0 = lower_bound_s0(&pr, 128).unwrap();
        assert!(!s0.bound.is_exact());
        assert!(s0.bound.hi <= b1);
        assert!(lower_bound_h1(&pr, 128).unwrap().bound.lo <= b1);
    }

    #[test]
    fn line_bounds() {
        let v = line_s_lower_bound(2, 2, &rint(4), &rint(2), &rint(2), 128).unwrap();
        assert!(v.is_exact());
        let v = line_s_lower_bound(3, 1, &rint(8), &rint(2), &rint(3), 128).unwrap();
        assert!(v.lo.is_positive());
        assert!(matches!(
            line_s_lower_bound(2, 2, &rint(9), &rat(3, 2), &rint(2), 128),
            Err(Error::WBelowV { .. })
        ));
    }

    #[test]
    fn degenerate_and_w_below_v() {
        let p = profile(&[(0, 0), (1, 0), (1, 1), (0, 1)], rat(1, 2), false).with_t(rat(3, 4));
        assert!(matches!(lower_bound_h1(&p, 64), Err(Error::WBelowV { .. })));
    }
}
