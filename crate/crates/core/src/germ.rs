//! Affine toric log germs and their minimal log discrepancies.
//!
//! A germ is a strongly convex full-dimensional cone `σ` in a lattice `N`,
//! given by the primitive generators `e_i` of its rays, together with
//! boundary coefficients `b_i`. The log discrepancy function `ψ` is the
//! linear function with `ψ(e_i) = 1 - b_i`, and the minimal log discrepancy
//! at the invariant point is the minimum of `ψ` over `N ∩ relint(σ)`.
//!
//! That minimum is attained inside the half-open box
//! `{sum_{i in S} t_i e_i : t_i in (0, 1]}` of some linearly independent set
//! `S` of rays: write a minimizer in the relative interior of a simplicial
//! subcone and subtract integer multiples of the `e_i`, which cannot
//! increase `ψ` because `ψ(e_i) >= 0`. [`ToricGerm::mld_at_origin`] scans
//! exactly these boxes.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{linalg, Rational, RationalVector, SuperLattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricGerm {
    lattice: SuperLattice,
    rays: Vec<RationalVector>,
    coefficients: Vec<Rational>,
    facets: Vec<RationalVector>,
}

/// The linear function `ψ` with `ψ(e_i) = 1 - b_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogDiscrepancyFunction {
    pub covector: RationalVector,
}

impl LogDiscrepancyFunction {
    pub fn eval(&self, v: &RationalVector) -> Rational {
        self.covector.dot(v)
    }
}

/// A set of ray indices spanning a face of the cone.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    ray_indices: Vec<usize>,
}

impl Face {
    pub fn ray_indices(&self) -> &[usize] {
        &self.ray_indices
    }
}

/// Where the minimum of `ψ` is attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MldWitness {
    pub point: RationalVector,
    /// Linearly independent rays whose half-open box contains `point`.
    pub rays: Vec<usize>,
    /// `point = sum_k box_coefficients[k] * e_{rays[k]}`, each in `(0, 1]`.
    pub box_coefficients: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mld {
    pub value: Rational,
    pub witness: MldWitness,
}

impl ToricGerm {
    /// Validates every germ invariant; each kind of degenerate input has its own error.
    pub fn new(
        lattice: SuperLattice,
        rays: Vec<RationalVector>,
        coefficients: Vec<Rational>,
    ) -> Result<Self> {
        let d = lattice.ambient_dim();
        if coefficients.len() != rays.len() {
            return Err(Error::DimensionMismatch {
                expected: rays.len(),
                got: coefficients.len(),
            });
        }
        for (i, r) in rays.iter().enumerate() {
            if r.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: r.dim(),
                });
            }
            if r.is_zero() {
                return Err(Error::ZeroVector);
            }
            if !lattice.is_primitive(r)? {
                return Err(Error::NotPrimitive(format!("ray {i} = ({r})")));
            }
        }
        for ((i, a), (j, b)) in rays.iter().enumerate().tuple_combinations() {
            match a.ratio_to(b) {
                Some(c) if c.is_positive() => return Err(Error::DuplicateRay(i, j)),
                Some(_) => return Err(Error::OppositeRays(i, j)),
                None => {}
            }
        }
        let rank = linalg::rank(&rays);
        if rank < d {
            return Err(Error::NotFullDimensional { rank, dim: d });
        }
        let facets = facet_normals(&rays, d);
        let sum = facets
            .iter()
            .fold(RationalVector::zeros(d), |acc, u| &acc + u);
        if facets.is_empty() || rays.iter().any(|r| !sum.dot(r).is_positive()) {
            return Err(Error::NonConvex);
        }
        for (i, b) in coefficients.iter().enumerate() {
            if b.is_negative() {
                return Err(Error::NotEffective {
                    index: i,
                    value: b.to_string(),
                });
            }
            if b > &Rational::one() {
                return Err(Error::NotLogCanonical {
                    index: i,
                    value: (Rational::one() - b).to_string(),
                });
            }
        }
        Ok(ToricGerm {
            lattice,
            rays,
            coefficients,
            facets,
        })
    }

    /// The standard cone spanned by `e_1, ..., e_d` in `lattice`.
    pub fn standard(lattice: SuperLattice, coefficients: Vec<Rational>) -> Result<Self> {
        let d = lattice.ambient_dim();
        let rays = (0..d).map(|i| RationalVector::unit(d, i)).collect();
        Self::new(lattice, rays, coefficients)
    }

    pub fn dim(&self) -> usize {
        self.lattice.ambient_dim()
    }

    pub fn lattice(&self) -> &SuperLattice {
        &self.lattice
    }

    pub fn rays(&self) -> &[RationalVector] {
        &self.rays
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// The log discrepancies `a_i = 1 - b_i` of the rays.
    pub fn ray_discrepancies(&self) -> Vec<Rational> {
        self.coefficients
            .iter()
            .map(|b| Rational::one() - b)
            .collect()
    }

    /// Inward facet normals as primitive integer vectors, sorted.
    pub fn facets(&self) -> &[RationalVector] {
        &self.facets
    }

    pub fn in_cone(&self, v: &RationalVector) -> bool {
        v.dim() == self.dim() && self.facets.iter().all(|u| !u.dot(v).is_negative())
    }

    pub fn in_relint(&self, v: &RationalVector) -> bool {
        v.dim() == self.dim() && self.facets.iter().all(|u| u.dot(v).is_positive())
    }

    pub fn compute_psi(&self) -> Result<LogDiscrepancyFunction> {
        let d = self.dim();
        let targets = self.ray_discrepancies();
        let basis = linalg::independent_subset(&self.rays);
        // rows e_i of the system <e_i, ψ> = a_i, passed as columns of the transpose
        let columns: Vec<RationalVector> = (0..d)
            .map(|j| basis.iter().map(|&i| self.rays[i][j].clone()).collect())
            .collect();
        let rhs: RationalVector = basis.iter().map(|&i| targets[i].clone()).collect();
        let covector: RationalVector = linalg::solve(&columns, &rhs)
            .ok_or(Error::NotRCartier)?
            .into();
        for (i, (ray, a)) in self.rays.iter().zip(&targets).enumerate() {
            let value = covector.dot(ray);
            if &value != a {
                return Err(Error::NotRCartier);
            }
            if value.is_negative() {
                return Err(Error::NotLogCanonical {
                    index: i,
                    value: value.to_string(),
                });
            }
        }
        Ok(LogDiscrepancyFunction { covector })
    }

    /// `ψ(e)`, the log discrepancy of the divisor extracted by the barycentric
    /// subdivision at the primitive lattice point `e` of the cone.
    pub fn log_discrepancy_of_divisor(&self, e: &RationalVector) -> Result<Rational> {
        if !self.lattice.is_primitive(e)? {
            return Err(Error::NotPrimitive(format!("({e})")));
        }
        if !self.in_cone(e) {
            return Err(Error::NotInCone(format!("({e})")));
        }
        Ok(self.compute_psi()?.eval(e))
    }

    /// Minimum of `ψ` over `N ∩ relint(σ)`, with a point attaining it.
    ///
    /// Subsets are scanned by size, then lexicographically; the first
    /// minimizer in that order is reported, independent of scheduling.
    pub fn mld_at_origin(&self) -> Result<Mld> {
        let psi = self.compute_psi()?;
        let n = self.rays.len();
        let subsets: Vec<Vec<usize>> = (1..=self.dim())
            .flat_map(|k| (0..n).combinations(k))
            .filter(|s| {
                let rays: Vec<RationalVector> = s.iter().map(|&i| self.rays[i].clone()).collect();
                // rays on a common facet only reach the boundary
                SuperLattice::independent(&rays)
                    && !self
                        .facets
                        .iter()
                        .any(|u| rays.iter().all(|r| u.dot(r).is_zero()))
            })
            .collect();

        let candidates: Vec<Option<(Rational, usize, MldWitness)>> = subsets
            .par_iter()
            .enumerate()
            .map(|(order, subset)| -> Result<_> {
                let rays: Vec<RationalVector> =
                    subset.iter().map(|&i| self.rays[i].clone()).collect();
                let mut best: Option<(Rational, usize, MldWitness)> = None;
                for bp in self.lattice.box_points(&rays)? {
                    if !self.in_relint(&bp.point) {
                        continue;
                    }
                    let value = psi.eval(&bp.point);
                    if best.as_ref().is_none_or(|(v, _, _)| &value < v) {
                        best = Some((
                            value,
                            order,
                            MldWitness {
                                point: bp.point,
                                rays: subset.clone(),
                                box_coefficients: bp.coefficients,
                            },
                        ));
                    }
                }
                Ok(best)
            })
            .collect::<Result<_>>()?;

        let (value, _, witness) = candidates
            .into_iter()
            .flatten()
            .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
            .ok_or_else(|| {
                Error::VerificationFailed(
                    "no lattice point in the relative interior was found".into(),
                )
            })?;
        Ok(Mld { value, witness })
    }

    /// Checks that `indices` is exactly the ray set of a face of the cone.
    ///
    /// The face generated by a set of rays consists of the rays lying on
    /// every facet that contains the set; the set must equal that closure.
    pub fn face(&self, indices: &[usize]) -> Result<Face> {
        let mut sorted: Vec<usize> = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.iter().any(|&i| i >= self.rays.len()) {
            return Err(Error::NotAFace(indices.to_vec()));
        }
        let containing: Vec<&RationalVector> = self
            .facets
            .iter()
            .filter(|u| sorted.iter().all(|&i| u.dot(&self.rays[i]).is_zero()))
            .collect();
        let closure: Vec<usize> = (0..self.rays.len())
            .filter(|&i| containing.iter().all(|u| u.dot(&self.rays[i]).is_zero()))
            .collect();
        if closure != sorted {
            return Err(Error::NotAFace(indices.to_vec()));
        }
        Ok(Face {
            ray_indices: sorted,
        })
    }

    /// Dimension of the face, which is the codimension of its orbit.
    pub fn face_dim(&self, face: &Face) -> usize {
        let rays: Vec<RationalVector> = face
            .ray_indices
            .iter()
            .map(|&i| self.rays[i].clone())
            .collect();
        linalg::rank(&rays)
    }

    /// The germ of the face: lattice `N ∩ span(τ)` with the face's rays and coefficients.
    ///
    /// Coordinates are taken with respect to a maximal independent set of the
    /// face's rays, so those rays become the standard basis.
    pub fn face_restriction(&self, face: &Face) -> Result<ToricGerm> {
        if face.ray_indices.is_empty() {
            return Err(Error::NotAFace(Vec::new()));
        }
        let face_rays: Vec<RationalVector> = face
            .ray_indices
            .iter()
            .map(|&i| self.rays[i].clone())
            .collect();
        let basis: Vec<RationalVector> = linalg::independent_subset(&face_rays)
            .into_iter()
            .map(|k| face_rays[k].clone())
            .collect();
        let lattice = self.lattice.ray_coordinate_lattice(&basis)?;
        let rays = face_rays
            .iter()
            .map(|r| {
                linalg::solve(&basis, r)
                    .map(RationalVector::new)
                    .ok_or_else(|| Error::VerificationFailed("face ray outside its span".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let coefficients = face
            .ray_indices
            .iter()
            .map(|&i| self.coefficients[i].clone())
            .collect();
        ToricGerm::new(lattice, rays, coefficients)
    }

    /// Minimal log discrepancy at a point of codimension `point_codim` lying in
    /// the orbit of `face`: the face germ's mld plus `point_codim - dim(face)`.
    pub fn mld_at_point(&self, face: &Face, point_codim: usize) -> Result<Rational> {
        let c = self.face_dim(face);
        if point_codim < c.max(1) || point_codim > self.dim() {
            return Err(Error::CodimOutOfRange {
                codim: point_codim,
                min: c.max(1),
                max: self.dim(),
            });
        }
        let extra = Rational::from_integer((point_codim - c).into());
        if face.ray_indices.is_empty() {
            // a point of the open torus
            return Ok(extra);
        }
        Ok(self.face_restriction(face)?.mld_at_origin()?.value + extra)
    }
}

/// Inward normals of the facets of `cone(rays)`, as primitive integer vectors.
///
/// Every facet contains `d - 1` independent rays, so each `(d-1)`-subset
/// spanning a hyperplane is tried and kept when all rays lie on one side.
fn facet_normals(rays: &[RationalVector], d: usize) -> Vec<RationalVector> {
    let mut found = BTreeSet::new();
    for subset in (0..rays.len()).combinations(d - 1) {
        let rows: Vec<RationalVector> = subset.iter().map(|&i| rays[i].clone()).collect();
        let normal = match linalg::nullspace(&rows, d).as_slice() {
            [u] => u.clone(),
            _ => continue,
        };
        let signs: Vec<Rational> = rays.iter().map(|r| normal.dot(r)).collect();
        let normal = if signs.iter().all(|s| !s.is_negative()) {
            normal
        } else if signs.iter().all(|s| !s.is_positive()) {
            -&normal
        } else {
            continue;
        };
        found.insert(normal.primitive_integral());
    }
    found.into_iter().collect()
}

impl fmt::Display for ToricGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N = {}; rays", self.lattice)?;
        for (r, b) in self.rays.iter().zip(&self.coefficients) {
            write!(f, " ({r})[b={b}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{int, ratio};
    use proptest::prelude::*;

    fn rv(s: &str) -> RationalVector {
        s.parse().unwrap()
    }

    fn lat(dim: usize, gens: &[&str]) -> SuperLattice {
        SuperLattice::new(dim, gens.iter().map(|g| rv(g)).collect()).unwrap()
    }

    fn zeros(n: usize) -> Vec<Rational> {
        vec![int(0); n]
    }

    fn standard(d: usize, gens: &[&str], b: Vec<Rational>) -> ToricGerm {
        ToricGerm::standard(lat(d, gens), b).unwrap()
    }

    /// Cone on e1, e2, e3, (1,1,-1) in `lattice`.
    fn four_ray(lattice: SuperLattice) -> ToricGerm {
        let rays = vec![rv("1,0,0"), rv("0,1,0"), rv("0,0,1"), rv("1,1,-1")];
        ToricGerm::new(lattice, rays, zeros(4)).unwrap()
    }

    /// Minimum of ψ over lattice points of relint(σ) on the grid
    /// `(1/D) Z ∩ [-bound, bound]^d`, D the common denominator of `N`.
    fn brute_force_mld(germ: &ToricGerm, bound: i64) -> Rational {
        let psi = germ.compute_psi().unwrap();
        let d = germ.dim();
        let den: i64 = germ
            .lattice()
            .hermite_basis()
            .scale
            .clone()
            .try_into()
            .unwrap();
        let steps = 2 * bound * den + 1;
        let mut best: Option<Rational> = None;
        for code in 0..steps.pow(d as u32) {
            let mut c = code;
            let v: RationalVector = (0..d)
                .map(|_| {
                    let k = c % steps - bound * den;
                    c /= steps;
                    ratio(k, den)
                })
                .collect();
            if germ.lattice().is_member(&v) && germ.in_relint(&v) {
                let value = psi.eval(&v);
                if best.as_ref().is_none_or(|b| &value < b) {
                    best = Some(value);
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn psi_examples() {
        assert_eq!(
            standard(2, &[], zeros(2)).compute_psi().unwrap().covector,
            rv("1,1")
        );
        let g = standard(2, &[], vec![ratio(1, 2), int(0)]);
        assert_eq!(g.compute_psi().unwrap().covector, rv("1/2,1"));
        let g = four_ray(SuperLattice::integral(3));
        assert_eq!(g.compute_psi().unwrap().covector, rv("1,1,1"));
    }

    #[test]
    fn psi_not_r_cartier() {
        let g = ToricGerm::new(
            SuperLattice::integral(3),
            vec![rv("1,0,0"), rv("0,1,0"), rv("0,0,1"), rv("1,1,-1")],
            vec![int(0), int(0), int(0), ratio(1, 2)],
        )
        .unwrap();
        assert_eq!(g.compute_psi(), Err(Error::NotRCartier));
    }

    #[test]
    fn construction_rejects_degenerate_input() {
        let z2 = SuperLattice::integral(2);
        let err = |rays: &[&str], b: Vec<Rational>| {
            ToricGerm::new(z2.clone(), rays.iter().map(|r| rv(r)).collect(), b).unwrap_err()
        };
        assert_eq!(err(&["1,0", "2,0", "0,1"], zeros(3)).code(), "NotPrimitive");
        assert_eq!(
            err(&["1,0", "-1,0", "0,1"], zeros(3)),
            Error::OppositeRays(0, 1)
        );
        assert_eq!(
            err(&["1,0"], zeros(1)),
            Error::NotFullDimensional { rank: 1, dim: 2 }
        );
        assert_eq!(err(&["1,0", "0,1", "-1,-1"], zeros(3)), Error::NonConvex);
        assert_eq!(
            err(&["1,0", "0,1"], vec![int(-1), int(0)]).code(),
            "NotEffective"
        );
        assert_eq!(
            err(&["1,0", "0,1"], vec![int(2), int(0)]).code(),
            "NotLogCanonical"
        );
        assert_eq!(err(&["1,0", "0,1"], zeros(1)).code(), "DimensionMismatch");
        assert_eq!(err(&["1/2,0", "0,1"], zeros(2)).code(), "NotMember");
        assert_eq!(
            err(&["1,0", "0,1", "1,1", "1,1"], zeros(4)),
            Error::DuplicateRay(2, 3)
        );
    }

    #[test]
    fn divisor_log_discrepancies() {
        let smooth = standard(2, &[], zeros(2));
        assert_eq!(
            smooth.log_discrepancy_of_divisor(&rv("1,1")).unwrap(),
            int(2)
        );
        assert_eq!(
            smooth.log_discrepancy_of_divisor(&rv("1,2")).unwrap(),
            int(3)
        );
        let g = standard(2, &[], vec![ratio(1, 2), int(0)]);
        assert_eq!(
            g.log_discrepancy_of_divisor(&rv("1,1")).unwrap(),
            ratio(3, 2)
        );
        assert_eq!(
            smooth
                .log_discrepancy_of_divisor(&rv("2,2"))
                .unwrap_err()
                .code(),
            "NotPrimitive"
        );
        assert_eq!(
            smooth
                .log_discrepancy_of_divisor(&rv("-1,2"))
                .unwrap_err()
                .code(),
            "NotInCone"
        );
        assert_eq!(
            smooth
                .log_discrepancy_of_divisor(&rv("1/2,2"))
                .unwrap_err()
                .code(),
            "NotMember"
        );
    }

    #[test]
    fn facet_examples() {
        assert_eq!(standard(2, &[], zeros(2)).facets(), &[rv("0,1"), rv("1,0")]);
        assert_eq!(standard(3, &[], zeros(3)).facets().len(), 3);
        let g = four_ray(SuperLattice::integral(3));
        assert_eq!(g.facets().len(), 4);
    }

    /// Facets of the four-ray cone by brute force over all small integer
    /// functionals: nonnegative on every ray and vanishing on >= 2 independent rays.
    #[test]
    fn four_ray_facets_match_brute_force() {
        let g = four_ray(SuperLattice::integral(3));
        let mut expected = Vec::new();
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -2i64..=2 {
                    let u = RationalVector::from_ints(&[a, b, c]);
                    if u.is_zero() || u.primitive_integral() != u {
                        continue;
                    }
                    let vals: Vec<Rational> = g.rays().iter().map(|r| u.dot(r)).collect();
                    let on: Vec<RationalVector> = g
                        .rays()
                        .iter()
                        .zip(&vals)
                        .filter(|(_, v)| v.is_zero())
                        .map(|(r, _)| r.clone())
                        .collect();
                    if vals.iter().all(|v| !v.is_negative()) && linalg::rank(&on) == 2 {
                        expected.push(u);
                    }
                }
            }
        }
        expected.sort();
        assert_eq!(g.facets(), expected.as_slice());
    }

    #[test]
    fn relint_examples() {
        let s = standard(2, &[], zeros(2));
        assert!(s.in_relint(&rv("1,1")));
        assert!(!s.in_relint(&rv("1,0")));
        assert!(four_ray(SuperLattice::integral(3)).in_relint(&rv("1,1,0")));
    }

    #[test]
    fn smooth_mld_is_dimension() {
        for d in 2..=4 {
            let m = standard(d, &[], zeros(d)).mld_at_origin().unwrap();
            assert_eq!(m.value, int(d as i64));
            assert_eq!(m.witness.point, RationalVector::from_ints(&vec![1; d]));
        }
    }

    #[test]
    fn cyclic_quotient_mld() {
        let g = standard(2, &["1/3,1/3"], zeros(2));
        let m = g.mld_at_origin().unwrap();
        assert_eq!(m.value, ratio(2, 3));
        assert_eq!(m.witness.point, rv("1/3,1/3"));
        assert_eq!(m.value, brute_force_mld(&g, 2));
    }

    #[test]
    fn four_ray_quotient_mld() {
        let g = four_ray(lat(3, &["1/2,1/2,0"]));
        let m = g.mld_at_origin().unwrap();
        assert_eq!(m.value, int(1));
        assert_eq!(m.witness.point, rv("1/2,1/2,0"));
        assert_eq!(m.witness.rays, vec![0, 1]);
        assert_eq!(m.value, brute_force_mld(&g, 2));
    }

    #[test]
    fn face_checks() {
        let g = four_ray(SuperLattice::integral(3));
        assert!(g.face(&[3]).is_ok());
        assert!(g.face(&[0, 3]).is_ok());
        assert!(g.face(&[0, 1, 2, 3]).is_ok());
        // e3 and (1,1,-1) span a segment through the interior
        assert_eq!(g.face(&[2, 3]), Err(Error::NotAFace(vec![2, 3])));
        assert!(g.face(&[7]).is_err());
    }

    #[test]
    fn face_restriction_examples() {
        let g = standard(2, &[], vec![ratio(1, 2), int(0)]);
        let f = g.face_restriction(&g.face(&[0]).unwrap()).unwrap();
        assert_eq!(f.dim(), 1);
        assert_eq!(f.rays(), &[rv("1")]);
        assert_eq!(f.coefficients(), &[ratio(1, 2)]);
        assert_eq!(f.lattice(), &SuperLattice::integral(1));

        let g3 = standard(3, &[], vec![ratio(1, 3), ratio(1, 4), int(0)]);
        let f = g3.face_restriction(&g3.face(&[0, 1]).unwrap()).unwrap();
        assert_eq!(f.rays(), &[rv("1,0"), rv("0,1")]);
        assert_eq!(f.coefficients(), &[ratio(1, 3), ratio(1, 4)]);

        let g4 = ToricGerm::new(
            SuperLattice::integral(3),
            vec![rv("1,0,0"), rv("0,1,0"), rv("0,0,1"), rv("1,1,-1")],
            vec![int(0), int(0), int(0), int(0)],
        )
        .unwrap();
        let f = g4.face_restriction(&g4.face(&[3]).unwrap()).unwrap();
        assert_eq!(f.dim(), 1);
        assert_eq!(f.coefficients(), &[int(0)]);
    }

    #[test]
    fn face_restriction_keeps_quotient_structure() {
        // the face spanned by e1, e2 of Z^3 + Z(1/2,1/2,0) is the A_1 surface germ
        let g = standard(3, &["1/2,1/2,0"], zeros(3));
        let f = g.face_restriction(&g.face(&[0, 1]).unwrap()).unwrap();
        assert_eq!(f.lattice().index(), 2u32.into());
        assert_eq!(f.mld_at_origin().unwrap().value, int(1));
        for r in f.rays() {
            assert!(f.lattice().is_primitive(r).unwrap());
        }
    }

    #[test]
    fn mld_at_point_examples() {
        let g = standard(2, &[], vec![ratio(1, 2), int(0)]);
        let e1 = g.face(&[0]).unwrap();
        assert_eq!(g.mld_at_point(&e1, 1).unwrap(), ratio(1, 2));
        assert_eq!(g.mld_at_point(&e1, 2).unwrap(), ratio(3, 2));
        let full = g.face(&[0, 1]).unwrap();
        assert_eq!(
            g.mld_at_point(&full, 2).unwrap(),
            g.mld_at_origin().unwrap().value
        );
        assert!(matches!(
            g.mld_at_point(&full, 1),
            Err(Error::CodimOutOfRange { .. })
        ));
        assert!(matches!(
            g.mld_at_point(&e1, 3),
            Err(Error::CodimOutOfRange { .. })
        ));
        let torus = g.face(&[]).unwrap();
        assert_eq!(g.mld_at_point(&torus, 2).unwrap(), int(2));
    }

    fn small_germ() -> impl Strategy<Value = ToricGerm> {
        let gen = prop::collection::vec((0i64..4, 1i64..5), 2);
        let b = prop::collection::vec(
            prop::sample::select(vec![(0, 1), (1, 3), (1, 2), (1, 1)]),
            2,
        );
        (gen, b).prop_filter_map("standard rays must stay primitive", |(g, b)| {
            let g: RationalVector = g.into_iter().map(|(n, d)| ratio(n, d)).collect();
            let b = b.into_iter().map(|(n, d)| ratio(n, d)).collect();
            ToricGerm::standard(SuperLattice::new(2, vec![g]).unwrap(), b).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn mld_matches_brute_force(g in small_germ()) {
            let m = g.mld_at_origin().unwrap();
            prop_assert!(!m.value.is_negative());
            prop_assert_eq!(&m.value, &g.compute_psi().unwrap().eval(&m.witness.point));
            prop_assert_eq!(&m.value, &brute_force_mld(&g, 2));
            let psi = g.compute_psi().unwrap();
            for (ray, a) in g.rays().iter().zip(g.ray_discrepancies()) {
                prop_assert_eq!(psi.eval(ray), a);
            }
        }

        #[test]
        fn mld_is_monotone_in_boundary(g in small_germ(), i in 0usize..2) {
            let mut b = g.coefficients().to_vec();
            let raised = (&b[i] + Rational::one()) / int(2);
            b[i] = raised;
            let h = ToricGerm::new(g.lattice().clone(), g.rays().to_vec(), b).unwrap();
            prop_assert!(h.mld_at_origin().unwrap().value <= g.mld_at_origin().unwrap().value);
        }
    }

    #[test]
    fn non_simplicial_matches_brute_force() {
        for gens in [
            &[][..],
            &["1/2,1/2,0"][..],
            &["1/3,0,2/3"][..],
            &["0,1/2,1/2"][..],
        ] {
            let g = four_ray(lat(3, gens));
            assert_eq!(
                g.mld_at_origin().unwrap().value,
                brute_force_mld(&g, 2),
                "{gens:?}"
            );
        }
    }
}
