use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntegerMatrix, SmithForm};
use super::{into_unit_interval, lcm_of_denominators, linalg, Rational, RationalVector};
use crate::error::{Error, Result};

/// The lattice `N = Z^d + Z g_1 + ... + Z g_k` for rational generators `g_j`.
///
/// The Hermite basis is computed once at construction.
#[derive(Clone, Debug)]
pub struct SuperLattice {
    dim: usize,
    extra_generators: Vec<RationalVector>,
    basis: HermiteBasis,
}

/// A basis of `N`: column `j` of `matrix`, divided by `scale`, is the `j`-th
/// basis vector. `matrix` is lower triangular with positive diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteBasis {
    pub matrix: IntegerMatrix,
    pub scale: BigInt,
}

/// A lattice point `sum_i coefficients[i] * ray_i` with every coefficient in `(0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoxPoint {
    pub coefficients: Vec<Rational>,
    pub point: RationalVector,
}

impl HermiteBasis {
    pub fn vectors(&self) -> Vec<RationalVector> {
        let s = Rational::from_integer(self.scale.clone());
        (0..self.matrix.cols())
            .map(|j| {
                self.matrix
                    .column(j)
                    .into_iter()
                    .map(|e| Rational::from_integer(e) / &s)
                    .collect()
            })
            .collect()
    }

    /// Coordinates of `v` in this basis (forward substitution).
    pub fn coordinates(&self, v: &RationalVector) -> Vec<Rational> {
        let n = self.matrix.rows();
        let s = Rational::from_integer(self.scale.clone());
        let mut y: Vec<Rational> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = &v[i] * &s;
            for (j, yj) in y.iter().enumerate() {
                let l = &self.matrix[(i, j)];
                if !l.is_zero() {
                    acc -= yj * Rational::from_integer(l.clone());
                }
            }
            y.push(acc / Rational::from_integer(self.matrix[(i, i)].clone()));
        }
        y
    }

    /// `[N : Z^d] = scale^d / det(matrix)`.
    pub fn index_over_integers(&self) -> BigInt {
        let n = self.matrix.rows();
        let det = (0..n).fold(BigInt::one(), |acc, i| acc * &self.matrix[(i, i)]);
        num_traits::pow(self.scale.clone(), n) / det
    }
}

impl SuperLattice {
    pub fn new(dim: usize, extra_generators: Vec<RationalVector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if let Some(g) = extra_generators.iter().find(|g| g.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: g.dim(),
            });
        }
        let scale = lcm_of_denominators(extra_generators.iter().flat_map(|g| g.iter()));
        let mut rows: Vec<Vec<BigInt>> = (0..dim)
            .map(|i| {
                let mut r = vec![BigInt::zero(); dim];
                r[i] = scale.clone();
                r
            })
            .collect();
        let s = Rational::from_integer(scale.clone());
        for g in &extra_generators {
            rows.push(g.iter().map(|e| (e * &s).to_integer()).collect());
        }
        let hnf = IntegerMatrix::from_rows(rows).hermite_normal_form();
        debug_assert_eq!(hnf.rows(), dim);
        Ok(SuperLattice {
            dim,
            extra_generators,
            basis: HermiteBasis {
                matrix: hnf.transpose(),
                scale,
            },
        })
    }

    /// `Z^d` itself.
    pub fn integral(dim: usize) -> Self {
        Self::new(dim, Vec::new()).expect("positive dimension")
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn extra_generators(&self) -> &[RationalVector] {
        &self.extra_generators
    }

    pub fn hermite_basis(&self) -> &HermiteBasis {
        &self.basis
    }

    /// The index `[N : Z^d]`.
    pub fn index(&self) -> BigInt {
        self.basis.index_over_integers()
    }

    pub fn is_member(&self, v: &RationalVector) -> bool {
        v.dim() == self.dim && self.basis.coordinates(v).iter().all(Rational::is_integer)
    }

    /// Integer coordinates of `v` in the Hermite basis.
    pub fn integer_coordinates(&self, v: &RationalVector) -> Result<Vec<BigInt>> {
        self.check_dim(v)?;
        self.basis
            .coordinates(v)
            .into_iter()
            .map(|y| y.is_integer().then(|| y.to_integer()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::NotMember(v.to_string()))
    }

    /// Largest `k` with `v / k` in `N`.
    pub fn divisibility(&self, v: &RationalVector) -> Result<BigInt> {
        let y = self.integer_coordinates(v)?;
        let g = y.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e));
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(g)
    }

    pub fn is_primitive(&self, v: &RationalVector) -> Result<bool> {
        Ok(self.divisibility(v)?.is_one())
    }

    fn check_dim(&self, v: &RationalVector) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        Ok(())
    }

    /// Smith form of the integer coordinate matrix of `rays` (one column per ray).
    fn ray_smith(&self, rays: &[RationalVector]) -> Result<SmithForm> {
        let mut cols = Vec::with_capacity(rays.len());
        for r in rays {
            cols.push(self.integer_coordinates(r)?);
        }
        let rows = (0..self.dim)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let smith = IntegerMatrix::from_rows(rows).smith_normal_form();
        if smith.rank() < rays.len() {
            return Err(Error::DependentRays);
        }
        Ok(smith)
    }

    /// The lattice `{t in Q^r : sum_i t_i ray_i in N}`, which contains `Z^r`.
    ///
    /// This is `N ∩ span(rays)` written in the basis given by the rays.
    pub fn ray_coordinate_lattice(&self, rays: &[RationalVector]) -> Result<SuperLattice> {
        let r = rays.len();
        if r == 0 {
            return Err(Error::ZeroDimension);
        }
        let smith = self.ray_smith(rays)?;
        let generators = smith_generators(&smith, r)
            .into_iter()
            .filter(|g| !g.is_integral())
            .collect();
        SuperLattice::new(r, generators)
    }

    /// All points of `N` of the form `sum_i t_i ray_i` with every `t_i` in `(0, 1]`,
    /// ordered lexicographically by `t`.
    ///
    /// One point per coset of `sum Z ray_i` in `N ∩ span(rays)`, read off from
    /// the Smith form of the ray coordinate matrix.
    pub fn box_points(&self, rays: &[RationalVector]) -> Result<Vec<BoxPoint>> {
        let r = rays.len();
        let smith = self.ray_smith(rays)?;
        let steps = smith_generators(&smith, r);
        let orders: Vec<BigInt> = smith.diagonal[..r].to_vec();

        let mut out = Vec::new();
        let mut counter = vec![BigInt::zero(); r];
        loop {
            let mut t = vec![Rational::zero(); r];
            for (c, step) in counter.iter().zip(&steps) {
                if c.is_zero() {
                    continue;
                }
                let c = Rational::from_integer(c.clone());
                for (tj, sj) in t.iter_mut().zip(step.iter()) {
                    *tj += &c * sj;
                }
            }
            let t: Vec<Rational> = t.iter().map(into_unit_interval).collect();
            let mut point = RationalVector::zeros(self.dim);
            for (tj, ray) in t.iter().zip(rays) {
                point = &point + &ray.scale(tj);
            }
            out.push(BoxPoint {
                coefficients: t,
                point,
            });
            // mixed radix increment
            let mut k = 0;
            loop {
                if k == r {
                    out.sort();
                    return Ok(out);
                }
                counter[k] += 1;
                if counter[k] < orders[k] {
                    break;
                }
                counter[k] = BigInt::zero();
                k += 1;
            }
        }
    }

    /// Convenience form of [`SuperLattice::box_points`] returning only the points.
    pub fn box_point_vectors(&self, rays: &[RationalVector]) -> Result<Vec<RationalVector>> {
        Ok(self
            .box_points(rays)?
            .into_iter()
            .map(|b| b.point)
            .collect())
    }

    /// Linear independence of `rays` over `Q`.
    pub fn independent(rays: &[RationalVector]) -> bool {
        linalg::rank(rays) == rays.len()
    }
}

/// Generators `right[:, i] / diagonal[i]` of the ray coordinate lattice modulo `Z^r`.
fn smith_generators(smith: &SmithForm, r: usize) -> Vec<RationalVector> {
    (0..r)
        .map(|i| {
            let s = Rational::from_integer(smith.diagonal[i].abs());
            smith
                .right
                .column(i)
                .into_iter()
                .map(|q| Rational::from_integer(q) / &s)
                .collect()
        })
        .collect()
}

impl PartialEq for SuperLattice {
    /// Equal as subgroups of `Q^d`.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.basis == other.basis
    }
}

impl Eq for SuperLattice {}

impl fmt::Display for SuperLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z^{}", self.dim)?;
        for g in &self.extra_generators {
            write!(f, " + Z({g})")?;
        }
        Ok(())
    }
}
