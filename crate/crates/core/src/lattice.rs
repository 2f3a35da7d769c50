//! Integer lattices: primitive vectors, Smith-form indices, quotient lattices
//! and simplicial cone coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{from_int, gcd_slice, Int, Rat};
use crate::linalg::{self, Matrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector(Vec<Int>);

impl LatticeVector {
    pub fn new(coords: Vec<Int>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = BigInt::one();
        v
    }

    /// Integer vector from rationals; `None` if some entry is fractional.
    pub fn from_rats(v: &[Rat]) -> Option<Self> {
        v.iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(LatticeVector)
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn content(&self) -> Option<Int> {
        gcd_slice(&self.0)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_some_and(|g| g.is_one())
    }

    pub fn to_rats(&self) -> Vec<Rat> {
        self.0.iter().map(from_int).collect()
    }

    pub fn pair(&self, u: &[Rat]) -> Rat {
        self.0
            .iter()
            .zip(u)
            .fold(Rat::zero(), |s, (a, b)| s + from_int(a) * b)
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, k: &Int) -> Self {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Coordinates permuted: output coordinate `i` is input coordinate `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        LatticeVector(perm.iter().map(|&p| self.0[p].clone()).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub fn primitive_part(v: &[Int]) -> Result<LatticeVector> {
    let g = gcd_slice(v).ok_or(Error::ZeroVector)?;
    Ok(LatticeVector(v.iter().map(|x| x / &g).collect()))
}

/// Primitive integer vector on the ray through a nonzero rational vector,
/// together with the positive rational `s` such that `v = s·result`.
pub fn primitive_of_rational(v: &[Rat]) -> Result<(LatticeVector, Rat)> {
    let l = crate::exact::denom_lcm(v);
    let ints: Vec<Int> = v.iter().map(|x| (x * from_int(&l)).to_integer()).collect();
    let g = gcd_slice(&ints).ok_or(Error::ZeroVector)?;
    let p = LatticeVector(ints.iter().map(|x| x / &g).collect());
    Ok((p, Rat::new(g, l)))
}

pub fn int_matrix_to_rat(rows: &[LatticeVector]) -> Matrix {
    rows.iter().map(|r| r.to_rats()).collect()
}

/// Elementary divisors of an integer matrix (nonzero diagonal of its Smith form).
pub fn smith_diagonal(rows: &[Vec<Int>]) -> Vec<Int> {
    let mut a: Vec<Vec<Int>> = rows.to_vec();
    let nr = a.len();
    let nc = if nr == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    for t in 0..nr.min(nc) {
        let Some((pi, pj)) = min_abs_entry(&a, |i, j| i >= t && j >= t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..nr {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&p);
                    for j in t..nc {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..nc {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&p);
                    for row in a.iter_mut().skip(t) {
                        let s = &q * &row[t];
                        row[j] -= s;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                let (pi, pj) = min_abs_entry(&a, |i, j| (i == t && j >= t) || (j == t && i >= t))
                    .expect("pivot row or column is nonzero");
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                continue;
            }
            let p = a[t][t].clone();
            let bad = (t + 1..nr).find(|&i| (t + 1..nc).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    for j in t..nc {
                        let s = a[i][j].clone();
                        a[t][j] += s;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_abs_entry(a: &[Vec<Int>], keep: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, Int)> = None;
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if keep(i, j) && !x.is_zero() {
                let ax = x.abs();
                if best.as_ref().is_none_or(|b| ax < b.2) {
                    best = Some((i, j, ax));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Index of the Z-span of `vectors` in its saturation.
pub fn lattice_index(vectors: &[LatticeVector]) -> Result<Int> {
    if vectors.is_empty() {
        return Ok(BigInt::one());
    }
    if linalg::rank(&int_matrix_to_rat(vectors)) < vectors.len() {
        return Err(Error::DependentGenerators);
    }
    let rows: Vec<Vec<Int>> = vectors.iter().map(|v| v.0.clone()).collect();
    Ok(smith_diagonal(&rows).iter().product())
}

/// `N / Z·v` with an explicit basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientLattice {
    pub parent_rank: usize,
    pub modded_vector: LatticeVector,
    /// Lifts to the parent of the quotient basis vectors.
    pub basis_of_quotient: Vec<LatticeVector>,
    /// `(parent_rank − 1) × parent_rank` integer matrix.
    pub projection_matrix: Vec<Vec<Int>>,
}

impl QuotientLattice {
    pub fn new(rank: usize, v: &LatticeVector) -> Result<Self> {
        if v.rank() != rank {
            return Err(Error::DimensionMismatch { expected: rank, found: v.rank() });
        }
        if !v.is_primitive() {
            return Err(Error::NotPrimitive(v.to_string()));
        }
        // Row operations drive w = U·v to e₁.
        let mut u: Vec<Vec<Int>> = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let mut w = v.0.clone();
        for i in (1..rank).rev() {
            let (a, b) = (w[i - 1].clone(), w[i].clone());
            if b.is_zero() {
                continue;
            }
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (c, d) = (-(&b / &g), &a / &g);
            let (ri, rj) = (u[i - 1].clone(), u[i].clone());
            u[i - 1] = ri.iter().zip(&rj).map(|(p, q)| &x * p + &y * q).collect();
            u[i] = ri.iter().zip(&rj).map(|(p, q)| &c * p + &d * q).collect();
            w[i - 1] = g;
            w[i] = BigInt::zero();
        }
        if w[0].is_negative() {
            u[0] = u[0].iter().map(|x| -x).collect();
        }
        let inv = linalg::inverse(&u.iter().map(|r| r.iter().map(from_int).collect()).collect())
            .ok_or_else(|| Error::Internal("quotient basis matrix is singular".into()))?;
        let basis_of_quotient = (1..rank)
            .map(|j| {
                LatticeVector::from_rats(&inv.iter().map(|row| row[j].clone()).collect::<Vec<_>>())
                    .ok_or_else(|| Error::Internal("quotient basis matrix is not unimodular".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QuotientLattice {
            parent_rank: rank,
            modded_vector: v.clone(),
            basis_of_quotient,
            projection_matrix: u[1..].to_vec(),
        })
    }

    pub fn rank(&self) -> usize {
        self.parent_rank - 1
    }

    pub fn project(&self, w: &LatticeVector) -> LatticeVector {
        LatticeVector(
            self.projection_matrix
                .iter()
                .map(|row| row.iter().zip(&w.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn project_rats(&self, w: &[Rat]) -> Vec<Rat> {
        self.projection_matrix
            .iter()
            .map(|row| row.iter().zip(w).fold(Rat::zero(), |s, (a, b)| s + from_int(a) * b))
            .collect()
    }

    pub fn lift(&self, q: &LatticeVector) -> LatticeVector {
        let mut out = LatticeVector::zero(self.parent_rank);
        for (c, b) in q.0.iter().zip(&self.basis_of_quotient) {
            out = out.add(&b.scaled(c));
        }
        out
    }

    pub fn lift_rats(&self, q: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.parent_rank];
        for (c, b) in q.iter().zip(&self.basis_of_quotient) {
            for (o, x) in out.iter_mut().zip(&b.0) {
                *o += c * from_int(x);
            }
        }
        out
    }
}

pub fn quotient_lattice(rank: usize, v: &LatticeVector) -> Result<QuotientLattice> {
    QuotientLattice::new(rank, v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    pub generators: Vec<LatticeVector>,
    pub ambient_rank: usize,
}

impl RationalCone {
    pub fn new(generators: Vec<LatticeVector>, ambient_rank: usize) -> Result<Self> {
        for g in &generators {
            if g.rank() != ambient_rank {
                return Err(Error::DimensionMismatch { expected: ambient_rank, found: g.rank() });
            }
            if !g.is_primitive() {
                return Err(Error::NotPrimitive(g.to_string()));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            if generators[..i].contains(a) {
                return Err(Error::InvalidInput(format!("repeated cone generator {a}")));
            }
        }
        Ok(RationalCone { generators, ambient_rank })
    }

    pub fn dim(&self) -> usize {
        linalg::rank(&int_matrix_to_rat(&self.generators))
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.generators.len()
    }

    pub fn multiplicity(&self) -> Result<Int> {
        lattice_index(&self.generators)
    }

    /// Coefficients of `v` in the generators; errors if `v` is not in the cone.
    pub fn coordinates(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        let c = self.span_coordinates(v)?;
        if c.iter().any(Signed::is_negative) {
            return Err(Error::NotInCone(fmt_rats(v)));
        }
        Ok(c)
    }

    /// Coefficients of `v` in the (independent) generators, of any sign.
    pub fn span_coordinates(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if !self.is_simplicial() {
            return Err(Error::DependentGenerators);
        }
        let a = linalg::transpose(&int_matrix_to_rat(&self.generators));
        let a = if a.is_empty() { vec![Vec::new(); self.ambient_rank] } else { a };
        linalg::solve(&a, v).ok_or_else(|| Error::NotInCone(fmt_rats(v)))
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coordinates(v).is_ok()
    }
}

pub fn cone_coordinates(v: &LatticeVector, cone: &RationalCone) -> Result<Vec<Rat>> {
    if cone.dim() != cone.ambient_rank || cone.generators.len() != cone.ambient_rank {
        return Err(Error::DependentGenerators);
    }
    cone.coordinates(&v.to_rats())
}

pub fn fmt_rats(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(crate::exact::format_rational).collect();
    format!("({})", parts.join(","))
}
