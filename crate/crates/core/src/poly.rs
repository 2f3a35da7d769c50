//! Univariate rational polynomials and piecewise polynomials.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::linalg;

/// Coefficients in ascending order of degree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    pub coeffs: Vec<Rat>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `(x − a)`.
    pub fn linear_root(a: &Rat) -> Self {
        Self::new(vec![-a.clone(), Rat::one()])
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn antiderivative(&self) -> Self {
        let mut c = vec![Rat::zero()];
        c.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| a / Rat::from_integer((i + 1).into())),
        );
        Self::new(c)
    }

    pub fn integrate(&self, a: &Rat, b: &Rat) -> Rat {
        let f = self.antiderivative();
        f.eval(b) - f.eval(a)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::default();
        }
        let mut c = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Rat::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::constant(Rat::one()), |acc, _| acc.mul(self))
    }

    /// `x · p(x)`.
    pub fn mul_x(&self) -> Self {
        self.mul(&Self::new(vec![Rat::zero(), Rat::one()]))
    }

    /// Unique polynomial of degree < len through the points.
    pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> Result<Self> {
        let vander: linalg::Matrix = xs
            .iter()
            .map(|x| {
                let mut row = Vec::with_capacity(xs.len());
                let mut p = Rat::one();
                for _ in 0..xs.len() {
                    row.push(p.clone());
                    p *= x;
                }
                row
            })
            .collect();
        linalg::solve_square(&vander, ys)
            .map(Self::new)
            .ok_or_else(|| Error::Internal("interpolation nodes are not distinct".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePolynomial {
    /// Strictly increasing; piece i lives on `[breakpoints[i], breakpoints[i+1]]`.
    pub breakpoints: Vec<Rat>,
    pub pieces: Vec<Polynomial>,
}

impl PiecewisePolynomial {
    pub fn new(breakpoints: Vec<Rat>, pieces: Vec<Polynomial>) -> Result<Self> {
        if breakpoints.len() != pieces.len() + 1 || pieces.is_empty() {
            return Err(Error::InvalidInput("piecewise polynomial needs k pieces and k+1 breakpoints".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("breakpoints must be strictly increasing".into()));
        }
        Ok(PiecewisePolynomial { breakpoints, pieces })
    }

    pub fn start(&self) -> &Rat {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &Rat {
        self.breakpoints.last().expect("nonempty")
    }

    /// Index of the piece used at `x`: the left-closed piece, the last one at the end.
    pub fn piece_index(&self, x: &Rat) -> Option<usize> {
        if x < self.start() || x > self.end() {
            return None;
        }
        let k = self.pieces.len();
        Some((0..k).find(|&i| x < &self.breakpoints[i + 1]).unwrap_or(k - 1))
    }

    /// Value at `x`; zero outside the support.
    pub fn eval(&self, x: &Rat) -> Rat {
        self.piece_index(x).map_or_else(Rat::zero, |i| self.pieces[i].eval(x))
    }

    /// Left derivative (`from_right = false`) or right derivative at `x`.
    pub fn one_sided_derivative(&self, x: &Rat, from_right: bool) -> Option<Rat> {
        if x < self.start() || x > self.end() {
            return None;
        }
        let k = self.pieces.len();
        let i = if from_right {
            if x == self.end() {
                return None;
            }
            (0..k).find(|&i| x < &self.breakpoints[i + 1])?
        } else {
            if x == self.start() {
                return None;
            }
            (0..k).find(|&i| x <= &self.breakpoints[i + 1])?
        };
        Some(self.pieces[i].derivative().eval(x))
    }

    /// `∫_a^b x^power · f(x) dx` clipped to the support.
    pub fn moment(&self, a: &Rat, b: &Rat, power: usize) -> Rat {
        let mut s = Rat::zero();
        for (i, p) in self.pieces.iter().enumerate() {
            let lo = if a > &self.breakpoints[i] { a } else { &self.breakpoints[i] };
            let hi = if b < &self.breakpoints[i + 1] { b } else { &self.breakpoints[i + 1] };
            if lo < hi {
                let mut q = p.clone();
                for _ in 0..power {
                    q = q.mul_x();
                }
                s += q.integrate(lo, hi);
            }
        }
        s
    }

    pub fn integral(&self) -> Rat {
        self.moment(&self.start().clone(), &self.end().clone(), 0)
    }
}
