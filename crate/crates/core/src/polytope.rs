//! Exact convex polytopes in H- and V-representation.
//!
//! Vertex enumeration tries every `dim`-subset of the halfspaces, so the cost is
//! `O(C(m, d) · d³)` rational operations; inputs are capped at `MAX_DIM`
//! dimensions and `MAX_HALFSPACES` inequalities.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, from_int, Rat};
use crate::linalg::{self, Matrix};
use crate::poly::{PiecewisePolynomial, Polynomial};

pub const MAX_DIM: usize = 6;
pub const MAX_HALFSPACES: usize = 32;
pub const MAX_POINTS: usize = 64;

/// `⟨normal, u⟩ ≥ offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }

    /// `⟨normal, u⟩ − offset`; nonnegative inside.
    pub fn slack(&self, u: &[Rat]) -> Rat {
        linalg::dot(&self.normal, u) - &self.offset
    }

    pub fn contains(&self, u: &[Rat]) -> bool {
        !self.slack(u).is_negative()
    }

    /// Positive rescaling with first nonzero normal entry of absolute value 1.
    pub fn normalized(&self) -> Halfspace {
        match self.normal.iter().find(|x| !x.is_zero()) {
            Some(p) => {
                let s = p.abs().recip();
                Halfspace {
                    normal: self.normal.iter().map(|x| x * &s).collect(),
                    offset: &self.offset * &s,
                }
            }
            None => self.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Polytope {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace>,
    /// Sorted lexicographically.
    pub vertices: Vec<Vec<Rat>>,
    pub full_dim: bool,
    // tight vertex indices of each halfspace (full-dimensional case only)
    facets: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassData {
    pub volume: Rat,
    pub barycenter: Option<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceProfile {
    pub axis: usize,
    pub t0: Rat,
    pub t1: Rat,
    /// `g(x)` = (n−1)-volume of the slice at `x`.
    pub g: PiecewisePolynomial,
    pub volume: Rat,
    /// Barycenter coordinate along the axis.
    pub barycenter: Rat,
}

fn affine_rank(points: &[&Vec<Rat>]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Matrix = rest.iter().map(|p| linalg::sub(p, first)).collect();
    Some(linalg::rank(&diffs))
}

pub fn vertices_from_halfspaces(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Polytope> {
    if dim > MAX_DIM {
        return Err(Error::TooLarge(format!("dimension {dim} exceeds {MAX_DIM}")));
    }
    if halfspaces.len() > MAX_HALFSPACES {
        return Err(Error::TooLarge(format!("{} halfspaces exceed {MAX_HALFSPACES}", halfspaces.len())));
    }
    from_halfspaces_unchecked(dim, halfspaces)
}

pub(crate) fn from_halfspaces_unchecked(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Polytope> {
    for h in &halfspaces {
        if h.normal.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: h.normal.len() });
        }
    }
    if dim == 0 {
        if halfspaces.iter().all(|h| !h.offset.is_positive()) {
            return Ok(Polytope::from_parts(0, halfspaces, vec![Vec::new()]));
        }
        return Err(Error::Empty);
    }
    let normals: Matrix = halfspaces.iter().map(|h| h.normal.clone()).collect();
    let r = linalg::rank(&normals);
    if r < dim {
        // Lineality space is nontrivial: unbounded unless infeasible.
        let mut basis = normals.clone();
        let piv = linalg::rref(&mut basis);
        basis.truncate(piv.len());
        let reduced: Vec<Halfspace> = halfspaces
            .iter()
            .map(|h| Halfspace::new(linalg::mat_vec(&basis, &h.normal), h.offset.clone()))
            .collect();
        let feasible = if r == 0 {
            halfspaces.iter().all(|h| !h.offset.is_positive())
        } else {
            !enumerate_vertices(r, &reduced).is_empty()
        };
        return Err(if feasible { Error::Unbounded } else { Error::Empty });
    }
    let verts = enumerate_vertices(dim, &halfspaces);
    if verts.is_empty() {
        return Err(Error::Empty);
    }
    for combo in (0..halfspaces.len()).combinations(dim - 1) {
        let rows: Matrix = combo.iter().map(|&i| halfspaces[i].normal.clone()).collect();
        let ns = linalg::null_space(&rows, dim);
        if ns.len() != 1 {
            continue;
        }
        let d = &ns[0];
        let vals: Vec<Rat> = halfspaces.iter().map(|h| linalg::dot(&h.normal, d)).collect();
        if vals.iter().all(|x| !x.is_negative()) || vals.iter().all(|x| !x.is_positive()) {
            return Err(Error::Unbounded);
        }
    }
    Ok(Polytope::from_parts(dim, halfspaces, verts.into_iter().collect()))
}

fn enumerate_vertices(dim: usize, hs: &[Halfspace]) -> BTreeSet<Vec<Rat>> {
    let mut out = BTreeSet::new();
    for combo in (0..hs.len()).combinations(dim) {
        let a: Matrix = combo.iter().map(|&i| hs[i].normal.clone()).collect();
        let b: Vec<Rat> = combo.iter().map(|&i| hs[i].offset.clone()).collect();
        if let Some(x) = linalg::solve_square(&a, &b) {
            if hs.iter().all(|h| h.contains(&x)) {
                out.insert(x);
            }
        }
    }
    out
}

/// Convex hull of a finite point set.
pub fn from_vertices(dim: usize, points: &[Vec<Rat>]) -> Result<Polytope> {
    if dim > MAX_DIM {
        return Err(Error::TooLarge(format!("dimension {dim} exceeds {MAX_DIM}")));
    }
    if points.len() > MAX_POINTS {
        return Err(Error::TooLarge(format!("{} points exceed {MAX_POINTS}", points.len())));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
    }
    let pts: Vec<Vec<Rat>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if pts.is_empty() {
        return Err(Error::Empty);
    }
    let refs: Vec<&Vec<Rat>> = pts.iter().collect();
    let r = affine_rank(&refs).expect("nonempty");
    if r == dim {
        let hs = hull_halfspaces(dim, &pts);
        return from_halfspaces_unchecked(dim, hs);
    }
    // Lower-dimensional: hull inside a coordinate chart of the affine span.
    let chart = Chart::new(&pts);
    let proj: Vec<Vec<Rat>> = pts.iter().map(|p| chart.project(p)).collect();
    let inner = from_vertices(r, &proj)?;
    let vertices: Vec<Vec<Rat>> = inner.vertices.iter().map(|y| chart.lift(y)).collect::<BTreeSet<_>>().into_iter().collect();
    let mut hs: Vec<Halfspace> = inner
        .halfspaces
        .iter()
        .map(|h| {
            let mut n = vec![Rat::zero(); dim];
            for (k, &c) in chart.columns.iter().enumerate() {
                n[c] = h.normal[k].clone();
            }
            // chart coordinates of x are x[columns] − base[columns]
            let shift: Rat = chart.columns.iter().zip(&h.normal).fold(Rat::zero(), |s, (&c, a)| s + a * &chart.base[c]);
            Halfspace::new(n, &h.offset + shift)
        })
        .collect();
    for eq in chart.equations() {
        let c = linalg::dot(&eq, &chart.base);
        hs.push(Halfspace::new(eq.clone(), c.clone()));
        hs.push(Halfspace::new(eq.iter().map(|x| -x).collect(), -c));
    }
    Ok(Polytope::from_parts(dim, hs, vertices))
}

fn hull_halfspaces(dim: usize, pts: &[Vec<Rat>]) -> Vec<Halfspace> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for combo in (0..pts.len()).combinations(dim) {
        let p0 = &pts[combo[0]];
        let rows: Matrix = combo[1..].iter().map(|&i| linalg::sub(&pts[i], p0)).collect();
        let ns = linalg::null_space(&rows, dim);
        if ns.len() != 1 {
            continue;
        }
        let a = &ns[0];
        let c = linalg::dot(a, p0);
        let vals: Vec<Rat> = pts.iter().map(|p| linalg::dot(a, p) - &c).collect();
        let h = if vals.iter().all(|v| !v.is_negative()) {
            Halfspace::new(a.clone(), c)
        } else if vals.iter().all(|v| !v.is_positive()) {
            Halfspace::new(a.iter().map(|x| -x).collect(), -c)
        } else {
            continue;
        };
        let key = h.normalized();
        if seen.insert(key.clone()) {
            out.push(key);
        }
    }
    out
}

/// Affine span of a point set as a graph over some coordinates.
struct Chart {
    base: Vec<Rat>,
    columns: Vec<usize>,
    // rref rows of the difference matrix; identity on `columns`
    rows: Matrix,
}

impl Chart {
    fn new(pts: &[Vec<Rat>]) -> Chart {
        let base = pts[0].clone();
        let mut rows: Matrix = pts[1..].iter().map(|p| linalg::sub(p, &base)).collect();
        let columns = linalg::rref(&mut rows);
        rows.truncate(columns.len());
        Chart { base, columns, rows }
    }

    fn project(&self, x: &[Rat]) -> Vec<Rat> {
        self.columns.iter().map(|&c| &x[c] - &self.base[c]).collect()
    }

    fn lift(&self, y: &[Rat]) -> Vec<Rat> {
        let mut x = self.base.clone();
        for (yi, row) in y.iter().zip(&self.rows) {
            for (xj, rj) in x.iter_mut().zip(row) {
                *xj += yi * rj;
            }
        }
        x
    }

    fn equations(&self) -> Vec<Vec<Rat>> {
        linalg::null_space(&self.rows, self.base.len())
    }
}

impl Polytope {
    fn from_parts(dim: usize, halfspaces: Vec<Halfspace>, vertices: Vec<Vec<Rat>>) -> Polytope {
        let refs: Vec<&Vec<Rat>> = vertices.iter().collect();
        let full_dim = affine_rank(&refs) == Some(dim);
        if !full_dim {
            let mut seen = BTreeSet::new();
            let hs = halfspaces.into_iter().filter(|h| seen.insert(h.normalized())).collect();
            return Polytope { dim, halfspaces: hs, vertices, full_dim, facets: Vec::new() };
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut hs = Vec::new();
        let mut facets = Vec::new();
        for h in halfspaces {
            let tight: Vec<usize> = (0..vertices.len()).filter(|&i| h.slack(&vertices[i]).is_zero()).collect();
            let pts: Vec<&Vec<Rat>> = tight.iter().map(|&i| &vertices[i]).collect();
            if dim > 0 && affine_rank(&pts) == Some(dim - 1) && seen.insert(tight.clone()) {
                hs.push(h.normalized());
                facets.push(tight);
            }
        }
        Polytope { dim, halfspaces: hs, vertices, full_dim, facets }
    }

    pub fn contains(&self, u: &[Rat]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(u))
    }

    /// Strictly inside every facet inequality.
    pub fn strictly_contains(&self, u: &[Rat]) -> bool {
        self.halfspaces.iter().all(|h| h.slack(u).is_positive())
    }

    pub fn min_linear(&self, c: &[Rat]) -> Option<Rat> {
        self.vertices.iter().map(|v| linalg::dot(c, v)).min()
    }

    pub fn max_linear(&self, c: &[Rat]) -> Option<Rat> {
        self.vertices.iter().map(|v| linalg::dot(c, v)).max()
    }

    /// Normalized facet inequalities in sorted order.
    pub fn canonical_halfspaces(&self) -> Vec<Halfspace> {
        let mut v: Vec<Halfspace> = self.halfspaces.iter().map(Halfspace::normalized).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Simplices (as vertex-index lists) of the pulling triangulation from the
    /// lexicographically smallest vertex of each face.
    pub fn triangulation(&self) -> Vec<Vec<usize>> {
        if !self.full_dim {
            return Vec::new();
        }
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        self.triangulate_face(&all, self.dim)
    }

    fn triangulate_face(&self, face: &[usize], k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![face[0]]];
        }
        let apex = face[0];
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &self.facets {
            let s: Vec<usize> = face.iter().copied().filter(|i| f.contains(i)).collect();
            if s.contains(&apex) || s.len() < k {
                continue;
            }
            let pts: Vec<&Vec<Rat>> = s.iter().map(|&i| &self.vertices[i]).collect();
            if affine_rank(&pts) == Some(k - 1) {
                subfaces.insert(s);
            }
        }
        let mut out = Vec::new();
        for s in subfaces {
            for simplex in self.triangulate_face(&s, k - 1) {
                let mut t = vec![apex];
                t.extend(simplex);
                out.push(t);
            }
        }
        out
    }

    pub fn mass(&self) -> MassData {
        if self.vertices.is_empty() {
            return MassData { volume: Rat::zero(), barycenter: None };
        }
        if !self.full_dim {
            let chart = Chart::new(&self.vertices);
            let proj: Vec<Vec<Rat>> = self.vertices.iter().map(|p| chart.project(p)).collect();
            let b = if chart.columns.is_empty() {
                Vec::new()
            } else {
                let inner = from_vertices(chart.columns.len(), &proj).expect("chart hull of a nonempty set");
                inner.mass().barycenter.expect("full-dimensional in its chart")
            };
            return MassData { volume: Rat::zero(), barycenter: Some(chart.lift(&b)) };
        }
        let d = self.dim;
        if d == 0 {
            return MassData { volume: Rat::one(), barycenter: Some(Vec::new()) };
        }
        let fact = from_int(&factorial(d));
        let mut vol = Rat::zero();
        let mut moment = vec![Rat::zero(); d];
        let k = Rat::from_integer((d + 1).into());
        for s in self.triangulation() {
            let p0 = &self.vertices[s[0]];
            let m: Matrix = s[1..].iter().map(|&i| linalg::sub(&self.vertices[i], p0)).collect();
            let v = linalg::det(&m).abs() / &fact;
            for (j, mj) in moment.iter_mut().enumerate() {
                let sum: Rat = s.iter().fold(Rat::zero(), |acc, &i| acc + &self.vertices[i][j]);
                *mj += &v * sum / &k;
            }
            vol += v;
        }
        let bary = moment.iter().map(|x| x / &vol).collect();
        MassData { volume: vol, barycenter: Some(bary) }
    }

    pub fn volume(&self) -> Rat {
        self.mass().volume
    }

    /// Image under `x ↦ A·x + b`.
    pub fn affine_image(&self, a: &Matrix, b: &[Rat]) -> Result<Polytope> {
        if a.len() != self.dim || a.iter().any(|r| r.len() != self.dim) || b.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.len() });
        }
        let inv = linalg::inverse(a).ok_or(Error::SingularMap)?;
        let inv_t = linalg::transpose(&inv);
        let halfspaces = self
            .halfspaces
            .iter()
            .map(|h| {
                let n = linalg::mat_vec(&inv_t, &h.normal);
                let off = &h.offset + linalg::dot(&n, b);
                Halfspace::new(n, off).normalized()
            })
            .collect();
        let vertices: Vec<Vec<Rat>> = self
            .vertices
            .iter()
            .map(|v| linalg::add(&linalg::mat_vec(a, v), b))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Ok(Polytope::from_parts(self.dim, halfspaces, vertices))
    }

    /// `{u ∈ P : u_axis = x}` in the remaining coordinates.
    pub fn slice(&self, axis: usize, x: &Rat) -> Result<Polytope> {
        let hs = self
            .halfspaces
            .iter()
            .map(|h| {
                let mut n = h.normal.clone();
                let a = n.remove(axis);
                Halfspace::new(n, &h.offset - a * x)
            })
            .collect();
        from_halfspaces_unchecked(self.dim - 1, hs)
    }

    pub fn axis_range(&self, axis: usize) -> Option<(Rat, Rat)> {
        let lo = self.vertices.iter().map(|v| v[axis].clone()).min()?;
        let hi = self.vertices.iter().map(|v| v[axis].clone()).max()?;
        Some((lo, hi))
    }

    pub fn slice_profile(&self, axis: usize) -> Result<SliceProfile> {
        if !self.full_dim || self.dim == 0 {
            return Err(Error::NotFullDim);
        }
        if axis >= self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: axis + 1 });
        }
        let n = self.dim;
        let breaks: Vec<Rat> = self.vertices.iter().map(|v| v[axis].clone()).collect::<BTreeSet<_>>().into_iter().collect();
        let mut pieces = Vec::new();
        for w in breaks.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let h = b - a;
            if n == 1 {
                pieces.push(Polynomial::constant(Rat::one()));
                continue;
            }
            let node = |num: i64, den: i64| a + &h * Rat::new(num.into(), den.into());
            let xs: Vec<Rat> = (1..=n as i64).map(|i| node(i, n as i64 + 1)).collect();
            let ys: Vec<Rat> = xs.iter().map(|x| self.slice(axis, x).map(|s| s.volume())).collect::<Result<_>>()?;
            let p = Polynomial::interpolate(&xs, &ys)?;
            let probe = node(1, 2 * (n as i64 + 1));
            if p.eval(&probe) != self.slice(axis, &probe)?.volume() {
                return Err(Error::Internal("slice volume is not polynomial on an interval".into()));
            }
            pieces.push(p);
        }
        let t0 = breaks[0].clone();
        let t1 = breaks.last().expect("nonempty").clone();
        let g = PiecewisePolynomial::new(breaks, pieces)?;
        let mass = self.mass();
        let volume = g.integral();
        if volume != mass.volume {
            return Err(Error::Internal("∫g differs from the triangulation volume".into()));
        }
        let barycenter = g.moment(&t0, &t1, 1) / &volume;
        if Some(&barycenter) != mass.barycenter.as_ref().map(|b| &b[axis]) {
            return Err(Error::Internal("∫x·g differs from the triangulation barycenter".into()));
        }
        Ok(SliceProfile { axis, t0, t1, g, volume, barycenter })
    }
}

pub fn volume_and_barycenter(p: &Polytope) -> MassData {
    p.mass()
}

pub fn affine_image(p: &Polytope, a: &Matrix, b: &[Rat]) -> Result<Polytope> {
    p.affine_image(a, b)
}

pub fn slice_profile(p: &Polytope, axis: usize) -> Result<SliceProfile> {
    p.slice_profile(axis)
}
