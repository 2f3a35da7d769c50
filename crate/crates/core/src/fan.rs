//! Simplicial fans, star subdivisions and quotient fans.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Int, Rat};
use crate::lattice::{
    fmt_rats, int_matrix_to_rat, lattice_index, primitive_part, LatticeVector, QuotientLattice,
    RationalCone,
};
use crate::linalg::{self, Matrix};

#[derive(Clone, Debug)]
pub struct Fan {
    pub rank: usize,
    pub rays: Vec<LatticeVector>,
    /// Maximal cones as sorted ray-index sets.
    pub cones: Vec<Vec<usize>>,
    pub simplicial: bool,
    pub complete: bool,
    pub smooth: bool,
    // inverse of the generator matrix (columns = rays) for full-dimensional cones
    inverses: Vec<Option<Matrix>>,
}

impl PartialEq for Fan {
    fn eq(&self, o: &Self) -> bool {
        self.rank == o.rank && self.rays == o.rays && self.cones == o.cones
    }
}

impl Fan {
    /// Validates and classifies a simplicial fan.
    pub fn new(rank: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        for (i, r) in rays.iter().enumerate() {
            if r.rank() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: r.rank() });
            }
            if r.is_zero() {
                return Err(Error::ZeroVector);
            }
            if !r.is_primitive() {
                return Err(Error::NonPrimitiveRay { index: i, vector: r.to_string() });
            }
            if rays[..i].contains(r) {
                return Err(Error::InvalidInput(format!("duplicate ray {r} at index {i}")));
            }
        }
        let mut sorted = Vec::with_capacity(cones.len());
        for c in cones {
            let mut c = c;
            c.sort_unstable();
            let n = c.len();
            c.dedup();
            if c.len() != n {
                return Err(Error::InvalidInput(format!("cone {c:?} repeats a ray")));
            }
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::InvalidInput(format!("cone references ray {bad}, only {} rays", rays.len())));
            }
            if c.len() > rank {
                return Err(Error::NonSimplicialCone(c));
            }
            sorted.push(c);
        }
        if rank > 0 && sorted.is_empty() {
            return Err(Error::InvalidInput("fan has no cones".into()));
        }
        for (i, c) in sorted.iter().enumerate() {
            if sorted[..i].contains(c) {
                return Err(Error::InvalidInput(format!("duplicate cone {c:?}")));
            }
        }
        let mut inverses = Vec::with_capacity(sorted.len());
        let mut smooth = true;
        for c in &sorted {
            let gens: Vec<LatticeVector> = c.iter().map(|&i| rays[i].clone()).collect();
            let m = int_matrix_to_rat(&gens);
            if linalg::rank(&m) < c.len() {
                return Err(Error::NonSimplicialCone(c.clone()));
            }
            if lattice_index(&gens)? != BigInt::one() {
                smooth = false;
            }
            inverses.push(if c.len() == rank {
                linalg::inverse(&linalg::transpose(&m))
            } else {
                None
            });
        }
        if rank == 0 {
            inverses = vec![Some(Vec::new()); sorted.len()];
        }
        for i in 0..rays.len() {
            if !sorted.iter().any(|c| c.contains(&i)) {
                return Err(Error::UnusedRay(i));
            }
        }
        let mut fan = Fan { rank, rays, cones: sorted, simplicial: true, complete: false, smooth, inverses };
        fan.complete = fan.probe_complete();
        Ok(fan)
    }

    fn probe_complete(&self) -> bool {
        if self.rank == 0 {
            return true;
        }
        if self.inverses.iter().any(Option::is_none) {
            return false;
        }
        let n = self.rank;
        let mut probes: Vec<Vec<Rat>> = Vec::new();
        for r in &self.rays {
            probes.push(r.to_rats());
            probes.push(r.neg().to_rats());
        }
        for i in 0..self.rays.len() {
            for j in i + 1..self.rays.len() {
                probes.push(self.rays[i].add(&self.rays[j]).neg().to_rats());
            }
        }
        let span: i64 = if n <= 4 { 2 } else { 1 };
        let width = (2 * span + 1) as usize;
        let total = width.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let v: Vec<Rat> = (0..n)
                .map(|_| {
                    let d = (c % width) as i64 - span;
                    c /= width;
                    Rat::from_integer(BigInt::from(d))
                })
                .collect();
            if v.iter().any(|x| !x.is_zero()) {
                probes.push(v);
            }
        }
        probes.iter().all(|p| !self.containing_cones(p).is_empty())
    }

    pub fn ray_index(&self, v: &LatticeVector) -> Option<usize> {
        self.rays.iter().position(|r| r == v)
    }

    pub fn cone_rays(&self, c: usize) -> Vec<LatticeVector> {
        self.cones[c].iter().map(|&i| self.rays[i].clone()).collect()
    }

    pub fn cone(&self, c: usize) -> RationalCone {
        RationalCone { generators: self.cone_rays(c), ambient_rank: self.rank }
    }

    pub fn find_cone(&self, set: &[usize]) -> Option<usize> {
        let mut s = set.to_vec();
        s.sort_unstable();
        self.cones.iter().position(|c| *c == s)
    }

    pub fn is_full_dim_cone(&self, c: usize) -> bool {
        self.inverses.get(c).is_some_and(Option::is_some)
    }

    /// Coefficients of `v` in the rays of a full-dimensional cone (any sign).
    pub fn coords_in_cone(&self, c: usize, v: &[Rat]) -> Option<Vec<Rat>> {
        self.inverses[c].as_ref().map(|inv| linalg::mat_vec(inv, v))
    }

    /// All maximal cones containing `v`, with its coordinates in each.
    pub fn containing_cones(&self, v: &[Rat]) -> Vec<(usize, Vec<Rat>)> {
        let mut out = Vec::new();
        for (i, c) in self.cones.iter().enumerate() {
            let coords = match &self.inverses[i] {
                Some(inv) => linalg::mat_vec(inv, v),
                None => {
                    let cone = RationalCone { generators: c.iter().map(|&j| self.rays[j].clone()).collect(), ambient_rank: self.rank };
                    match cone.span_coordinates(v) {
                        Ok(x) => x,
                        Err(_) => continue,
                    }
                }
            };
            if coords.iter().all(|x| !x.is_negative()) {
                out.push((i, coords));
            }
        }
        out
    }

    /// A maximal cone containing `v` (the first in cone order).
    pub fn locate(&self, v: &[Rat]) -> Result<(usize, Vec<Rat>)> {
        self.containing_cones(v)
            .into_iter()
            .next()
            .ok_or_else(|| Error::OutsideSupport(fmt_rats(v)))
    }

    pub fn in_support(&self, v: &[Rat]) -> bool {
        !self.containing_cones(v).is_empty()
    }

    pub fn cone_multiplicity(&self, c: usize) -> Int {
        lattice_index(&self.cone_rays(c)).expect("validated cones are simplicial")
    }

    /// Indices of maximal cones that contain ray `r`.
    pub fn star(&self, r: usize) -> Vec<usize> {
        (0..self.cones.len()).filter(|&c| self.cones[c].contains(&r)).collect()
    }

    /// Pairs of maximal cones sharing a codimension-one face.
    pub fn walls(&self) -> Vec<(usize, usize, Vec<usize>)> {
        let mut out = Vec::new();
        for i in 0..self.cones.len() {
            for j in i + 1..self.cones.len() {
                let common: Vec<usize> = self.cones[i].iter().copied().filter(|x| self.cones[j].contains(x)).collect();
                if common.len() + 1 == self.rank && self.cones[i].len() == self.rank && self.cones[j].len() == self.rank {
                    out.push((i, j, common));
                }
            }
        }
        out
    }
}

pub fn validate_fan(rank: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Result<Fan> {
    Fan::new(rank, rays, cones)
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    pub fan: Fan,
    /// Index of the subdivision ray in `fan`.
    pub ray: usize,
    /// Whether the ray had to be added.
    pub added: bool,
    /// For each maximal cone of `fan`, the maximal cone of the original fan containing it.
    pub parent: Vec<usize>,
}

pub fn star_subdivide(fan: &Fan, v: &LatticeVector) -> Result<Subdivision> {
    if v.rank() != fan.rank {
        return Err(Error::DimensionMismatch { expected: fan.rank, found: v.rank() });
    }
    if !v.is_primitive() {
        return Err(Error::NotPrimitive(v.to_string()));
    }
    if let Some(r) = fan.ray_index(v) {
        return Ok(Subdivision { fan: fan.clone(), ray: r, added: false, parent: (0..fan.cones.len()).collect() });
    }
    let vq = v.to_rats();
    let hits = fan.containing_cones(&vq);
    if hits.is_empty() {
        return Err(Error::OutsideSupport(v.to_string()));
    }
    let new = fan.rays.len();
    let mut rays = fan.rays.clone();
    rays.push(v.clone());
    let mut cones = Vec::new();
    let mut parent = Vec::new();
    for (i, c) in fan.cones.iter().enumerate() {
        match hits.iter().find(|(h, _)| *h == i) {
            None => {
                cones.push(c.clone());
                parent.push(i);
            }
            Some((_, lam)) => {
                for (pos, l) in lam.iter().enumerate() {
                    if l.is_positive() {
                        let mut child: Vec<usize> = c.iter().enumerate().filter(|&(p, _)| p != pos).map(|(_, &x)| x).collect();
                        child.push(new);
                        cones.push(child);
                        parent.push(i);
                    }
                }
            }
        }
    }
    let sub = Fan::new(fan.rank, rays, cones)?;
    Ok(Subdivision { fan: sub, ray: new, added: true, parent })
}

#[derive(Clone, Debug)]
pub struct QuotientFan {
    pub fan: Fan,
    pub lattice: QuotientLattice,
    /// Ray of the parent fan that was quotiented out.
    pub ray: usize,
    /// Parent ray mapping onto each quotient ray.
    pub ray_source: Vec<usize>,
    /// `π(parent ray) = multiplicity · quotient ray`.
    pub multiplicity: Vec<Int>,
    /// Parent maximal cone mapping onto each quotient cone.
    pub cone_source: Vec<usize>,
}

pub fn quotient_fan(fan: &Fan, v: &LatticeVector) -> Result<QuotientFan> {
    let r = fan.ray_index(v).ok_or_else(|| Error::NotARay(v.to_string()))?;
    quotient_fan_at(fan, r)
}

pub fn quotient_fan_at(fan: &Fan, r: usize) -> Result<QuotientFan> {
    let lattice = QuotientLattice::new(fan.rank, &fan.rays[r])?;
    let mut rays: Vec<LatticeVector> = Vec::new();
    let mut ray_source = Vec::new();
    let mut multiplicity = Vec::new();
    let mut cones = Vec::new();
    let mut cone_source = Vec::new();
    for (ci, c) in fan.cones.iter().enumerate() {
        if !c.contains(&r) {
            continue;
        }
        let mut qc = Vec::new();
        for &i in c.iter().filter(|&&i| i != r) {
            let img = lattice.project(&fan.rays[i]);
            let m = img.content().ok_or(Error::DependentGenerators)?;
            let p = primitive_part(img.coords())?;
            let idx = match rays.iter().position(|x| *x == p) {
                Some(k) => {
                    if ray_source[k] != i {
                        return Err(Error::AmbiguousCone(format!(
                            "rays {} and {i} have the same image in the quotient by {}",
                            ray_source[k], fan.rays[r]
                        )));
                    }
                    k
                }
                None => {
                    rays.push(p);
                    ray_source.push(i);
                    multiplicity.push(m);
                    rays.len() - 1
                }
            };
            qc.push(idx);
        }
        cones.push(qc);
        cone_source.push(ci);
    }
    // canonical sorted index sets; cone_source follows the cone order
    let q = Fan::new(fan.rank - 1, rays, cones)?;
    Ok(QuotientFan { fan: q, lattice, ray: r, ray_source, multiplicity, cone_source })
}

/// Whether `w` is a positive multiple of ray `k`'s image, i.e. `π(ray) = m·w`.
pub fn quotient_relation_holds(q: &QuotientFan, parent: &Fan, k: usize) -> bool {
    let img = q.lattice.project(&parent.rays[q.ray_source[k]]);
    img == q.fan.rays[k].scaled(&q.multiplicity[k]) && !q.multiplicity[k].is_zero()
}
