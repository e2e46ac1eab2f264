//! Exact rational polyhedral cones.
//!
//! Facets use the inner-normal convention: `x` lies in the cone iff
//! `h · x >= 0` for every facet `h`. Rays and facets are stored as primitive
//! integer vectors, reduced modulo the lineality space (resp. the implicit
//! equalities) by orthogonal projection and sorted lexicographically, so two
//! cones describing the same point set compare equal.

pub mod dd;
pub mod linalg;
pub mod lp;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{int_dot, int_dot_rat, Rational, RationalVector};
use crate::error::{Error, Result};
use dd::double_description;
use linalg::{nullspace, project_out, row_space_basis};
use lp::{LinearProgram, LpOutcome, Relation};

pub const MAX_DIM: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    generators: Vec<Vec<BigInt>>,
    lineality: Vec<Vec<BigInt>>,
    inequalities: Vec<Vec<BigInt>>,
    equalities: Vec<Vec<BigInt>>,
}

/// Result of a membership query, with an exact certificate either way.
#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    Inside {
        /// Nonnegative coefficients on `Cone::generators`.
        generator_coeffs: Vec<Rational>,
        /// Unrestricted coefficients on `Cone::lineality`.
        lineality_coeffs: Vec<Rational>,
    },
    Outside {
        /// A facet `h` of the cone with `h · v < 0`.
        separator: Vec<BigInt>,
    },
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::EmptyInput("cone dimension must be positive"));
    }
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge(dim));
    }
    Ok(())
}

fn uniform_dim(vectors: &[RationalVector]) -> Result<usize> {
    let dim = vectors
        .first()
        .ok_or(Error::EmptyInput("at least one vector is required"))?
        .dim();
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
    }
    Ok(dim)
}

fn negated(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| -x).collect()
}

fn canonical_set(vectors: &[Vec<BigInt>], modulo: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| project_out(v, modulo))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// True iff the rows reach rank `target`; stops as soon as they do.
fn rank_reaches<'a>(rows: impl Iterator<Item = &'a Vec<BigInt>>, dim: usize, target: usize) -> bool {
    if target == 0 {
        return true;
    }
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (p, b) in &basis {
            if !r[*p].is_zero() {
                let a = b[*p].clone();
                let c = r[*p].clone();
                for j in 0..dim {
                    r[j] = &r[j] * &a - &b[j] * &c;
                }
                r = crate::arith::primitive_int(r);
            }
        }
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            basis.push((p, r));
            if basis.len() >= target {
                return true;
            }
        }
    }
    false
}

/// Keeps the candidates that span extreme rays of the pointed cone they
/// generate, given that cone's complete facet list and implicit equalities.
fn extreme_among(
    candidates: &[Vec<BigInt>],
    facets: &[Vec<BigInt>],
    equalities: &[Vec<BigInt>],
    dim: usize,
) -> Vec<Vec<BigInt>> {
    let target = dim - 1;
    let mut out: Vec<Vec<BigInt>> = candidates
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .filter(|g| {
            let tight = facets.iter().filter(|h| int_dot(h, g).is_zero());
            rank_reaches(equalities.iter().chain(tight), dim, target)
        })
        .map(|g| crate::arith::primitive_int(g.clone()))
        .collect();
    out.sort();
    out.dedup();
    out
}

impl Cone {
    pub fn from_generators(vectors: &[RationalVector]) -> Result<Cone> {
        let dim = uniform_dim(vectors)?;
        let ints: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.primitive()).collect();
        Cone::from_int_generators(&ints, dim)
    }

    pub fn from_int_generators(vectors: &[Vec<BigInt>], dim: usize) -> Result<Cone> {
        check_dim(dim)?;
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        // Facets of cone(G) are the extreme rays of {y : y · g >= 0}.
        let dual = double_description(vectors, dim);
        let equalities = row_space_basis(&dual.lineality, dim);
        let inequalities = canonical_set(&dual.rays, &equalities);
        let lineality_raw = {
            let mut rows = inequalities.clone();
            rows.extend(equalities.iter().cloned());
            nullspace(&rows, dim)
        };
        let (generators, lineality) = if lineality_raw.is_empty() {
            let gens = extreme_among(vectors, &inequalities, &equalities, dim);
            (gens, Vec::new())
        } else {
            let mut rows = inequalities.clone();
            for e in &equalities {
                rows.push(e.clone());
                rows.push(negated(e));
            }
            let primal = double_description(&rows, dim);
            let lineality = row_space_basis(&primal.lineality, dim);
            (canonical_set(&primal.rays, &lineality), lineality)
        };
        Ok(Cone {
            dim,
            generators,
            lineality,
            inequalities,
            equalities,
        })
    }

    pub fn from_inequalities(normals: &[RationalVector]) -> Result<Cone> {
        let dim = uniform_dim(normals)?;
        let ints: Vec<Vec<BigInt>> = normals.iter().map(|v| v.primitive()).collect();
        Cone::from_int_inequalities(&ints, dim)
    }

    pub fn from_int_inequalities(normals: &[Vec<BigInt>], dim: usize) -> Result<Cone> {
        check_dim(dim)?;
        if let Some(v) = normals.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        let primal = double_description(normals, dim);
        let lineality = row_space_basis(&primal.lineality, dim);
        let generators = canonical_set(&primal.rays, &lineality);
        let equalities = {
            let mut rows = generators.clone();
            rows.extend(lineality.iter().cloned());
            row_space_basis(&nullspace(&rows, dim), dim)
        };
        let inequalities = if equalities.is_empty() {
            let mut tight_rows = generators.clone();
            for l in &lineality {
                tight_rows.push(l.clone());
                tight_rows.push(negated(l));
            }
            extreme_among(normals, &tight_rows, &lineality, dim)
        } else {
            let mut rows = generators.clone();
            for l in &lineality {
                rows.push(l.clone());
                rows.push(negated(l));
            }
            let dual = double_description(&rows, dim);
            canonical_set(&dual.rays, &equalities)
        };
        Ok(Cone {
            dim,
            generators,
            lineality,
            inequalities,
            equalities,
        })
    }

    /// The zero cone `{0}`.
    pub fn zero(dim: usize) -> Result<Cone> {
        check_dim(dim)?;
        Cone::from_int_generators(&[vec![BigInt::zero(); dim]], dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extreme-ray generators (modulo the lineality space).
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn lineality(&self) -> &[Vec<BigInt>] {
        &self.lineality
    }

    /// Irredundant inequalities, excluding implicit equalities.
    pub fn proper_facets(&self) -> &[Vec<BigInt>] {
        &self.inequalities
    }

    /// Basis of the implicit equalities (orthogonal complement of the span).
    pub fn equalities(&self) -> &[Vec<BigInt>] {
        &self.equalities
    }

    /// Full H-representation: proper facets plus each equality as a pair of
    /// opposite inequalities.
    pub fn facets(&self) -> Vec<Vec<BigInt>> {
        let mut out = self.inequalities.clone();
        for e in &self.equalities {
            out.push(e.clone());
            out.push(negated(e));
        }
        out.sort();
        out
    }

    /// Dimension of the linear span of the cone.
    pub fn span_dimension(&self) -> usize {
        self.dim - self.equalities.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equalities.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero_cone(&self) -> bool {
        self.generators.is_empty() && self.lineality.is_empty()
    }

    /// `{y : y · x >= 0 for all x in self}`.
    pub fn dual(&self) -> Cone {
        Cone {
            dim: self.dim,
            generators: self.inequalities.clone(),
            lineality: self.equalities.clone(),
            inequalities: self.generators.clone(),
            equalities: self.lineality.clone(),
        }
    }

    pub fn extremal_rays(&self) -> Result<Vec<RationalVector>> {
        if !self.is_pointed() {
            return Err(Error::NotStrictlyConvex);
        }
        Ok(self
            .generators
            .iter()
            .map(|g| RationalVector::from_big(g))
            .collect())
    }

    pub fn contains(&self, v: &RationalVector) -> Result<Membership> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        for h in self.facets() {
            if int_dot_rat(&h, v).is_negative() {
                return Ok(Membership::Outside { separator: h });
            }
        }
        let ng = self.generators.len();
        let nl = self.lineality.len();
        let mut lp = LinearProgram::new(ng + nl);
        for j in ng..ng + nl {
            lp.set_free(j);
        }
        for i in 0..self.dim {
            let row: Vec<Rational> = self
                .generators
                .iter()
                .chain(&self.lineality)
                .map(|g| Rational::from_integer(g[i].clone()))
                .collect();
            lp.add(row, Relation::Eq, v[i].clone());
        }
        match lp.solve() {
            LpOutcome::Optimal { mut x, .. } => {
                let lineality_coeffs = x.split_off(ng);
                Ok(Membership::Inside {
                    generator_coeffs: x,
                    lineality_coeffs,
                })
            }
            other => unreachable!("facet test passed but witness LP returned {other:?}"),
        }
    }

    /// Quick membership without a witness.
    pub fn contains_int(&self, v: &[BigInt]) -> bool {
        self.inequalities
            .iter()
            .all(|h| !int_dot(h, v).is_negative())
            && self.equalities.iter().all(|e| int_dot(e, v).is_zero())
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut rows = self.facets();
        rows.extend(other.facets());
        Cone::from_int_inequalities(&rows, self.dim)
    }
}

impl Serialize for Cone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let as_rat = |vs: &[Vec<BigInt>]| -> Vec<RationalVector> {
            vs.iter().map(|v| RationalVector::from_big(v)).collect()
        };
        let mut st = s.serialize_struct("Cone", 4)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("generators", &as_rat(&self.generators))?;
        st.serialize_field("facets", &as_rat(&self.facets()))?;
        st.serialize_field("lineality", &as_rat(&self.lineality))?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, to_big};

    fn rv(v: &[i64]) -> RationalVector {
        RationalVector::from_ints(v)
    }

    #[test]
    fn first_quadrant_is_self_dual() {
        let c = Cone::from_generators(&[rv(&[1, 0]), rv(&[0, 1])]).unwrap();
        assert_eq!(c.facets(), vec![to_big(&[0, 1]), to_big(&[1, 0])]);
        assert_eq!(c.dual(), c);
    }

    #[test]
    fn interior_generator_is_dropped() {
        let c = Cone::from_generators(&[rv(&[1, 0]), rv(&[0, 1]), rv(&[1, 1])]).unwrap();
        assert_eq!(c.generators(), &[to_big(&[0, 1]), to_big(&[1, 0])]);
        assert_eq!(
            c.extremal_rays().unwrap(),
            vec![rv(&[0, 1]), rv(&[1, 0])]
        );
    }

    #[test]
    fn rays_are_primitive() {
        let c = Cone::from_generators(&[rv(&[2, 0])]).unwrap();
        assert_eq!(c.extremal_rays().unwrap(), vec![rv(&[1, 0])]);
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let err = Cone::from_generators(&[rv(&[1, 0]), rv(&[1, 0, 0])]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn redundant_inequality() {
        let c = Cone::from_inequalities(&[rv(&[1, 0]), rv(&[0, 1]), rv(&[1, 1])]).unwrap();
        assert_eq!(c.generators(), &[to_big(&[0, 1]), to_big(&[1, 0])]);
        assert_eq!(c.proper_facets(), &[to_big(&[0, 1]), to_big(&[1, 0])]);
    }

    #[test]
    fn equality_collapses_a_coordinate() {
        let c = Cone::from_inequalities(&[rv(&[1, 0]), rv(&[-1, 0]), rv(&[0, 1])]).unwrap();
        assert!(c.is_pointed());
        assert_eq!(c.extremal_rays().unwrap(), vec![rv(&[0, 1])]);
        assert_eq!(c.equalities(), &[to_big(&[1, 0])]);
    }

    #[test]
    fn dual_of_a_ray_is_a_halfplane() {
        let c = Cone::from_generators(&[rv(&[1, 0])]).unwrap();
        let d = c.dual();
        assert_eq!(d.generators(), &[to_big(&[1, 0])]);
        assert_eq!(d.lineality(), &[to_big(&[0, 1])]);
        assert_eq!(d.proper_facets(), &[to_big(&[1, 0])]);
        assert_eq!(d.extremal_rays().unwrap_err(), Error::NotStrictlyConvex);
        // and the halfplane built from scratch agrees
        assert_eq!(Cone::from_inequalities(&[rv(&[1, 0])]).unwrap(), d);
    }

    #[test]
    fn membership_certificates() {
        let q = Cone::from_generators(&[rv(&[1, 0]), rv(&[0, 1])]).unwrap();
        match q.contains(&rv(&[1, 1])).unwrap() {
            Membership::Inside {
                generator_coeffs, ..
            } => assert_eq!(generator_coeffs, vec![rat(1), rat(1)]),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            q.contains(&rv(&[-1, 0])).unwrap(),
            Membership::Outside {
                separator: to_big(&[1, 0])
            }
        );
    }

    #[test]
    fn intersections() {
        let q = Cone::from_generators(&[rv(&[1, 0]), rv(&[0, 1])]).unwrap();
        let h = Cone::from_inequalities(&[rv(&[1, 1])]).unwrap();
        assert_eq!(q.intersect(&h).unwrap(), q);

        let wedge = Cone::from_generators(&[rv(&[1, 1]), rv(&[-1, 1])]).unwrap();
        let expected = Cone::from_generators(&[rv(&[1, 1]), rv(&[0, 1])]).unwrap();
        assert_eq!(q.intersect(&wedge).unwrap(), expected);

        let a = Cone::from_generators(&[rv(&[1, 0])]).unwrap();
        let b = Cone::from_generators(&[rv(&[-1, 0])]).unwrap();
        assert!(a.intersect(&b).unwrap().is_zero_cone());
    }

    #[test]
    fn zero_cone_has_all_coordinate_facets() {
        let z = Cone::zero(2).unwrap();
        assert!(z.generators().is_empty());
        assert_eq!(
            z.facets(),
            vec![
                to_big(&[-1, 0]),
                to_big(&[0, -1]),
                to_big(&[0, 1]),
                to_big(&[1, 0])
            ]
        );
    }

    #[test]
    fn dimension_guard() {
        assert_eq!(
            Cone::zero(17).unwrap_err(),
            Error::DimensionTooLarge(17)
        );
    }
}
