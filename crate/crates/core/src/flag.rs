//! Torus-invariant plt flags: the level fans and the cone-sequence data
//! `τ_j, γ_j, v_{j,k}, m_{j,k}, c_{j,k}, c'_{j,k}, l_j`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{from_int, Int, Rat};
use crate::fan::{quotient_fan_at, star_subdivide, Fan, QuotientFan, Subdivision};
use crate::lattice::{lattice_index, primitive_part, LatticeVector};

/// How flag vectors are expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FlagFrame {
    /// Each `v_k` is given in `N⁰`; its image in `N^{k-1}` is made primitive.
    #[default]
    Ambient,
    /// Each `v_k` is given in the coordinates of the computed basis of `N^{k-1}`.
    Quotient,
}

#[derive(Clone, Debug)]
pub struct FlagChain {
    pub rank: usize,
    /// Number of vectors supplied by the caller; the rest were completed.
    pub depth: usize,
    /// `v_k ∈ N^{k-1}` for k = 1..n (index k−1).
    pub vectors: Vec<LatticeVector>,
    /// `Σ_0 … Σ_{n-1}`.
    pub fans: Vec<Fan>,
    /// `Σ̃_0 … Σ̃_{n-1}`.
    pub subdivisions: Vec<Subdivision>,
    /// `quotients[k]` maps `Σ̃_k` onto `Σ_{k+1}`, k = 0..n−2.
    pub quotients: Vec<QuotientFan>,
    /// `τ_j` as a cone index of `Σ_j`.
    pub tau: Vec<usize>,
    /// `γ_j` as a cone index of `Σ̃_j`.
    pub gamma: Vec<usize>,
    /// `ray_idx[j][k]`: ray index in `Σ_j` of `v_{j+1,k+1}` for k ≥ j (0-based).
    pub ray_idx: Vec<Vec<usize>>,
    /// `m[j][k] = m_{j+1,k+1}`, 1 below the diagonal.
    pub m: Vec<Vec<Int>>,
    pub c: Vec<Vec<Rat>>,
    pub c_prime: Vec<Vec<Rat>>,
    pub admissible: bool,
    /// `l_0 … l_n` when admissible.
    pub l_values: Option<Vec<Int>>,
}

impl FlagChain {
    /// `v_{j,k}` (1-based) as a vector of `N^{j-1}`.
    pub fn v(&self, j: usize, k: usize) -> &LatticeVector {
        &self.fans[j - 1].rays[self.ray_idx[j - 1][k - 1]]
    }

    /// Rays `v_{1,1} … v_{1,n}` of `τ_0` in `N⁰`.
    pub fn tau0_rays(&self) -> Vec<LatticeVector> {
        (1..=self.rank).map(|k| self.v(1, k).clone()).collect()
    }

    /// Ray indices of `v_{1,1} … v_{1,n}` in the base fan.
    pub fn tau0_ray_indices(&self) -> &[usize] {
        &self.ray_idx[0]
    }

    pub fn tau0_multiplicity(&self) -> Int {
        self.fans[0].cone_multiplicity(self.tau[0])
    }

    pub fn is_complete(&self) -> bool {
        self.depth == self.rank
    }

    /// The first flag vector `v_1 ∈ N⁰`.
    pub fn first_vector(&self) -> &LatticeVector {
        &self.vectors[0]
    }

    /// Lift of a vector of `N^{k}` back to `N⁰` through the chosen quotient bases.
    pub fn lift_to_ambient(&self, k: usize, w: &LatticeVector) -> LatticeVector {
        let mut x = w.clone();
        for q in self.quotients[..k].iter().rev() {
            x = q.lattice.lift(&x);
        }
        x
    }

    /// Image in `N^{k}` of an ambient vector.
    pub fn project_from_ambient(&self, k: usize, w: &LatticeVector) -> LatticeVector {
        let mut x = w.clone();
        for q in &self.quotients[..k] {
            x = q.lattice.project(&x);
        }
        x
    }
}

/// Builds the flag chain of `vs` over `fan`, completing partial flags with the
/// first ray of each remaining level fan.
pub fn build_flag_chain(fan: &Fan, vs: &[LatticeVector], frame: FlagFrame) -> Result<FlagChain> {
    let n = fan.rank;
    if n == 0 {
        return Err(Error::InvalidInput("flags need a lattice of positive rank".into()));
    }
    if vs.is_empty() {
        return Err(Error::InvalidInput("a flag needs at least one vector".into()));
    }
    if vs.len() > n {
        return Err(Error::InvalidInput(format!("flag has {} vectors but the rank is {n}", vs.len())));
    }
    if !fan.complete {
        return Err(Error::InvalidInput("flag chains require a complete fan".into()));
    }

    let mut fans = vec![fan.clone()];
    let mut subdivisions: Vec<Subdivision> = Vec::new();
    let mut quotients: Vec<QuotientFan> = Vec::new();
    let mut vectors = Vec::new();
    for k in 0..n {
        let cur = &fans[k];
        let v = if k < vs.len() {
            match frame {
                FlagFrame::Ambient => {
                    if vs[k].rank() != n {
                        return Err(Error::DimensionMismatch { expected: n, found: vs[k].rank() });
                    }
                    let mut x = vs[k].clone();
                    for q in &quotients {
                        x = q.lattice.project(&x);
                    }
                    if k == 0 && !x.is_primitive() {
                        return Err(Error::NotPrimitive(x.to_string()));
                    }
                    primitive_part(x.coords())?
                }
                FlagFrame::Quotient => {
                    if vs[k].rank() != cur.rank {
                        return Err(Error::DimensionMismatch { expected: cur.rank, found: vs[k].rank() });
                    }
                    if !vs[k].is_primitive() {
                        return Err(Error::NotPrimitive(vs[k].to_string()));
                    }
                    vs[k].clone()
                }
            }
        } else {
            cur.rays[0].clone()
        };
        let sub = star_subdivide(cur, &v)?;
        if k + 1 < n {
            let q = quotient_fan_at(&sub.fan, sub.ray)?;
            fans.push(q.fan.clone());
            quotients.push(q);
        }
        subdivisions.push(sub);
        vectors.push(v);
    }

    // Backward pass. Level j (0-based) holds τ_j ∈ Σ_j with rays v_{j+1,j+1..n}.
    let mut tau = vec![0usize; n];
    let mut gamma = vec![0usize; n];
    let mut ray_idx: Vec<Vec<usize>> = vec![vec![usize::MAX; n]; n];
    let mut m: Vec<Vec<Int>> = vec![vec![BigInt::one(); n]; n];
    let mut c: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; n];

    let last = n - 1;
    let r_last = subdivisions[last].ray;
    ray_idx[last][last] = r_last;
    tau[last] = fans[last].find_cone(&[r_last]).ok_or_else(|| Error::Internal("last level ray is not a cone".into()))?;
    gamma[last] = tau[last];
    c[last][last] = Rat::one();

    for j in (0..last).rev() {
        let q = &quotients[j];
        let sub = &subdivisions[j];
        let tau_set: Vec<usize> = (j + 1..n).map(|k| ray_idx[j + 1][k]).collect();
        let qc = q.fan.find_cone(&tau_set).ok_or_else(|| Error::Internal(format!("τ_{} is not a quotient cone", j + 1)))?;
        let g = q.cone_source[qc];
        gamma[j] = g;
        for k in j + 1..n {
            let qr = ray_idx[j + 1][k];
            ray_idx[j][k] = q.ray_source[qr];
            m[j + 1][k] = q.multiplicity[qr].clone();
        }
        let t = sub.parent[g];
        let interior: Vec<Rat> = {
            let mut s = vec![Rat::zero(); fans[j].rank];
            for &r in &sub.fan.cones[g] {
                for (a, b) in s.iter_mut().zip(sub.fan.rays[r].coords()) {
                    *a += from_int(b);
                }
            }
            s
        };
        let owners: Vec<usize> = fans[j]
            .containing_cones(&interior)
            .into_iter()
            .filter(|(_, lam)| lam.iter().all(Signed::is_positive))
            .map(|(i, _)| i)
            .collect();
        if owners != vec![t] {
            return Err(Error::AmbiguousCone(format!(
                "level {j}: interior of γ lies in maximal cones {owners:?} of Σ_{j}"
            )));
        }
        tau[j] = t;
        ray_idx[j][j] = if sub.added {
            let others: Vec<usize> = (j + 1..n).map(|k| ray_idx[j][k]).collect();
            *fans[j].cones[t]
                .iter()
                .find(|r| !others.contains(r))
                .ok_or_else(|| Error::Internal("τ has no extra ray".into()))?
        } else {
            sub.ray
        };
        let basis: Vec<usize> = (j..n).map(|k| ray_idx[j][k]).collect();
        let cone_order = &fans[j].cones[t];
        let coords = fans[j]
            .coords_in_cone(t, &vectors[j].to_rats())
            .ok_or_else(|| Error::Internal("τ is not full-dimensional".into()))?;
        for (pos, &r) in cone_order.iter().enumerate() {
            let k = j + basis.iter().position(|&b| b == r).expect("τ rays are the basis");
            if coords[pos].is_negative() {
                return Err(Error::Internal(format!("v_{} has a negative coefficient in τ", j + 1)));
            }
            c[j][k] = coords[pos].clone();
        }
    }

    let mut c_prime = vec![vec![Rat::zero(); n]; n];
    for j in 0..n {
        for k in j..n {
            let prod: Int = (0..=j).map(|i| m[i][k].clone()).product();
            c_prime[j][k] = &c[j][k] / from_int(&prod);
        }
    }

    let admissible = subdivisions.iter().all(|s| !s.added);
    let l_values = if admissible {
        let rays: Vec<LatticeVector> = (0..n).map(|k| fans[0].rays[ray_idx[0][k]].clone()).collect();
        let mut l = vec![BigInt::one()];
        for k in 1..=n {
            l.push(lattice_index(&rays[..k])?);
        }
        Some(l)
    } else {
        None
    };

    Ok(FlagChain {
        rank: n,
        depth: vs.len(),
        vectors,
        fans,
        subdivisions,
        quotients,
        tau,
        gamma,
        ray_idx,
        m,
        c,
        c_prime,
        admissible,
        l_values,
    })
}
