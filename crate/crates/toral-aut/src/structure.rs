//! Structural invariants of a subvariety of the torus presented by minimal
//! generators: the exponent lattice spanned by support differences, the
//! quasitorus of torus elements acting trivially on invertible functions, and
//! the splitting of a maximal torus factor by an adapted (Smith-form) change
//! of coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::laurent::{support_differences, LatticeVector, LaurentError, LaurentPoly};
use crate::zlattice::{hnf, snf, IntMatrix};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StructureError {
    Laurent(LaurentError),
    /// A generator is a single monomial: it is invertible on the torus, so it
    /// cannot cut out a nonempty subvariety.
    UnitGenerator { index: usize },
    /// A generator's support moves outside the split coordinates — the input
    /// violated the minimal-generator contract.
    NotSemiInvariant { index: usize },
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureError::Laurent(e) => write!(f, "{}", e),
            StructureError::UnitGenerator { index } => write!(
                f,
                "generator {} is a unit monomial and cannot vanish on the torus",
                index + 1
            ),
            StructureError::NotSemiInvariant { index } => write!(
                f,
                "generator {} is not semi-invariant for the split torus action \
                 (minimal-generator contract violated)",
                index + 1
            ),
        }
    }
}

impl std::error::Error for StructureError {}

impl From<LaurentError> for StructureError {
    fn from(e: LaurentError) -> Self {
        StructureError::Laurent(e)
    }
}

/// Hermite-canonical basis of the lattice generated by all support differences
/// of the given polynomials. Empty input or all-singleton supports give the
/// trivial lattice (empty basis).
pub fn lattice_mx(gens: &[LaurentPoly]) -> Result<Vec<LatticeVector>, StructureError> {
    if gens.is_empty() {
        return Ok(Vec::new());
    }
    let diffs = support_differences(gens)?;
    if diffs.is_empty() {
        return Ok(Vec::new());
    }
    let (h, _) = hnf(&IntMatrix::from_row_vectors(&diffs));
    Ok((0..h.rows())
        .map(|i| h.row(i))
        .filter(|r| !r.is_zero())
        .collect())
}

/// A diagonalizable abelian group: finite cyclic factors times a torus.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Quasitorus {
    /// Orders of the nontrivial finite cyclic factors, in divisibility order.
    pub finite_factors: Vec<BigInt>,
    /// Dimension of the connected (torus) component.
    pub torus_rank: usize,
}

impl Quasitorus {
    pub fn is_trivial(&self) -> bool {
        self.finite_factors.is_empty() && self.torus_rank == 0
    }

    /// Group order; `None` when a positive-dimensional torus makes it infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.torus_rank > 0 {
            return None;
        }
        Some(self.finite_factors.iter().product())
    }
}

impl fmt::Display for Quasitorus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.finite_factors.is_empty() {
            write!(f, "1")?;
        } else {
            for (k, d) in self.finite_factors.iter().enumerate() {
                if k > 0 {
                    write!(f, " × ")?;
                }
                write!(f, "Z/{}", d)?;
            }
        }
        write!(f, ", torus rank {}", self.torus_rank)
    }
}

/// The subgroup of the torus cut out by `χ^m(t) = 1` for all `m` in the
/// lattice spanned by `mx_basis`, inside a torus of the given `rank`: the
/// invariant factors `> 1` give the finite part and the corank gives the
/// torus part.
pub fn quasitorus_hx(
    mx_basis: &[LatticeVector],
    rank: usize,
) -> Result<Quasitorus, StructureError> {
    for v in mx_basis {
        if v.len() != rank {
            return Err(StructureError::Laurent(LaurentError::RankMismatch {
                expected: rank,
                found: v.len(),
            }));
        }
    }
    if mx_basis.is_empty() {
        return Ok(Quasitorus {
            finite_factors: Vec::new(),
            torus_rank: rank,
        });
    }
    let d = snf(&IntMatrix::from_row_vectors(mx_basis));
    let factors = d.invariant_factors();
    Ok(Quasitorus {
        torus_rank: rank - factors.len(),
        finite_factors: factors.into_iter().filter(|f| !f.is_one()).collect(),
    })
}

/// Result of splitting off the maximal torus factor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SplitResult {
    /// Unimodular exponent change `m ↦ W·m` into adapted coordinates, in which
    /// the support differences use only the first `r − torus_rank` coordinates.
    pub change_of_basis: IntMatrix,
    /// Number of torus coordinates split off (`s`).
    pub torus_rank: usize,
    /// The generators rewritten in the first `r − s` adapted coordinates,
    /// normalized by a unit monomial so each support contains the origin.
    pub residual_generators: Vec<LaurentPoly>,
    /// True exactly when nothing remains: the variety is the full torus.
    pub is_torus: bool,
}

/// Split the maximal torus factor off a subvariety presented by minimal
/// generators in rank `r`: find an adapted unimodular change of exponent
/// coordinates after which every generator, normalized by a unit monomial,
/// involves only the first `r − s` variables.
pub fn split_torus_factor(
    gens: &[LaurentPoly],
    r: usize,
) -> Result<SplitResult, StructureError> {
    validate_generators(gens, r)?;
    if gens.is_empty() {
        return Ok(SplitResult {
            change_of_basis: IntMatrix::identity(r),
            torus_rank: r,
            residual_generators: Vec::new(),
            is_torus: true,
        });
    }
    let mx = lattice_mx(gens)?;
    split_with_lattice(gens, &mx, r)
}

pub(crate) fn validate_generators(gens: &[LaurentPoly], r: usize) -> Result<(), StructureError> {
    for (index, g) in gens.iter().enumerate() {
        if g.is_zero() {
            return Err(StructureError::Laurent(LaurentError::ZeroPolynomial));
        }
        if g.rank() != r {
            return Err(StructureError::Laurent(LaurentError::RankMismatch {
                expected: r,
                found: g.rank(),
            }));
        }
        if g.num_terms() == 1 {
            return Err(StructureError::UnitGenerator { index });
        }
    }
    Ok(())
}

/// Core of the splitting, parameterized over the difference lattice so the
/// semi-invariance violation path is reachable in tests.
pub(crate) fn split_with_lattice(
    gens: &[LaurentPoly],
    mx_basis: &[LatticeVector],
    r: usize,
) -> Result<SplitResult, StructureError> {
    let l = mx_basis.len();
    let s = r - l;
    // Smith form of the basis matrix B (l×r): U·B·V = S. The rows of V⁻¹
    // scaled by the invariant factors form a basis of the lattice, so the
    // exponent change m ↦ Vᵀ·m maps it into the first l coordinates.
    let w = if l == 0 {
        IntMatrix::identity(r)
    } else {
        snf(&IntMatrix::from_row_vectors(mx_basis)).v.transpose()
    };
    let mut residual_generators = Vec::with_capacity(gens.len());
    for (index, g) in gens.iter().enumerate() {
        let moved = g.map_exponents(&w);
        let base = moved.min_support().expect("nonzero generator").clone();
        let normalized = moved.mul_monomial(&crate::gaussian::GaussianRational::one(), &base.neg());
        for m in normalized.support() {
            if m.coords()[l..].iter().any(|c| !num_traits::Zero::is_zero(c)) {
                return Err(StructureError::NotSemiInvariant { index });
            }
        }
        residual_generators.push(LaurentPoly::from_terms(
            l,
            normalized
                .terms()
                .map(|(m, c)| (m.truncate(l), c.clone())),
        ));
    }
    Ok(SplitResult {
        change_of_basis: w,
        torus_rank: s,
        is_torus: residual_generators.is_empty(),
        residual_generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianRational;
    use crate::laurent::ScalarTuple;

    fn h2() -> LaurentPoly {
        LaurentPoly::from_i64_terms(
            2,
            &[
                (&[1, 1], (1, 1, 0, 1)),
                (&[1, 0], (-1, 1, 0, 1)),
                (&[0, 0], (-1, 1, 0, 1)),
            ],
        )
    }

    fn h3() -> LaurentPoly {
        LaurentPoly::from_i64_terms(
            3,
            &[
                (&[2, 0, 1], (1, 1, 0, 1)),
                (&[0, 2, 1], (1, 1, 0, 1)),
                (&[0, 0, 1], (-1, 1, 0, 1)),
                (&[0, 0, 0], (-1, 1, 0, 1)),
            ],
        )
    }

    /// h2 viewed in rank 3 with an idle third variable.
    fn h2_in_rank3() -> LaurentPoly {
        LaurentPoly::from_i64_terms(
            3,
            &[
                (&[1, 1, 0], (1, 1, 0, 1)),
                (&[1, 0, 0], (-1, 1, 0, 1)),
                (&[0, 0, 0], (-1, 1, 0, 1)),
            ],
        )
    }

    #[test]
    fn difference_lattice_of_running_examples() {
        assert_eq!(
            lattice_mx(&[h2()]).unwrap(),
            vec![
                LatticeVector::from_i64(&[1, 0]),
                LatticeVector::from_i64(&[0, 1])
            ]
        );
        assert_eq!(
            lattice_mx(&[h3()]).unwrap(),
            vec![
                LatticeVector::from_i64(&[2, 0, 0]),
                LatticeVector::from_i64(&[0, 2, 0]),
                LatticeVector::from_i64(&[0, 0, 1])
            ]
        );
        let single = LaurentPoly::monomial(
            2,
            LatticeVector::from_i64(&[2, 3]),
            GaussianRational::from_int(5),
        );
        assert!(lattice_mx(&[single]).unwrap().is_empty());
        assert!(lattice_mx(&[]).unwrap().is_empty());
    }

    #[test]
    fn quasitorus_of_running_examples() {
        // Full lattice: trivial stabilizer.
        let q2 = quasitorus_hx(&lattice_mx(&[h2()]).unwrap(), 2).unwrap();
        assert!(q2.is_trivial());
        assert_eq!(q2.order(), Some(BigInt::from(1)));
        // Index-4 lattice: Z/2 × Z/2.
        let q3 = quasitorus_hx(&lattice_mx(&[h3()]).unwrap(), 3).unwrap();
        assert_eq!(q3.finite_factors, vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(q3.torus_rank, 0);
        assert_eq!(q3.order(), Some(BigInt::from(4)));
        // Empty lattice: the whole torus.
        let q0 = quasitorus_hx(&[], 2).unwrap();
        assert_eq!(q0.torus_rank, 2);
        assert_eq!(q0.order(), None);
        assert_eq!(q3.to_string(), "Z/2 × Z/2, torus rank 0");
    }

    #[test]
    fn quasitorus_invariant_under_basis_change() {
        let basis = lattice_mx(&[h3()]).unwrap();
        let m = IntMatrix::from_row_vectors(&basis);
        // Multiply by a unimodular matrix on the left: same lattice.
        let u = IntMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 1, 0], &[3, 0, 1]]);
        assert!(u.is_unimodular());
        let twisted = u.mul(&m);
        let a = quasitorus_hx(&basis, 3).unwrap();
        let b = quasitorus_hx(&twisted.row_vectors(), 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_input_splits_to_full_torus() {
        let split = split_torus_factor(&[], 2).unwrap();
        assert!(split.is_torus);
        assert_eq!(split.torus_rank, 2);
        assert!(split.residual_generators.is_empty());
        assert_eq!(split.change_of_basis, IntMatrix::identity(2));
    }

    #[test]
    fn idle_variable_splits_off() {
        let split = split_torus_factor(&[h2_in_rank3()], 3).unwrap();
        assert_eq!(split.torus_rank, 1);
        assert!(!split.is_torus);
        assert_eq!(split.residual_generators, vec![h2()]);
        assert!(split.change_of_basis.is_unimodular());
    }

    #[test]
    fn full_rank_input_keeps_its_size() {
        let split = split_torus_factor(&[h3()], 3).unwrap();
        assert_eq!(split.torus_rank, 0);
        assert_eq!(split.residual_generators.len(), 1);
        let res = &split.residual_generators[0];
        assert_eq!(res.num_terms(), h3().num_terms());
        // The residual support contains the origin after normalization.
        assert_eq!(res.min_support().unwrap(), &LatticeVector::from_i64(&[0, 0, 0]));
    }

    #[test]
    fn inverse_change_recovers_generators_up_to_unit() {
        let g = h2_in_rank3();
        let split = split_torus_factor(std::slice::from_ref(&g), 3).unwrap();
        let l = 3 - split.torus_rank;
        let res = &split.residual_generators[0];
        let padded = LaurentPoly::from_terms(
            3,
            res.terms().map(|(m, c)| (m.pad(3), c.clone())),
        );
        let w_inv = split.change_of_basis.inverse_unimodular();
        let back = padded.map_exponents(&w_inv);
        let factor = crate::laurent::proportional_monomial_factor(&back, &g)
            .unwrap()
            .expect("pullback must be a unit-monomial multiple");
        assert_eq!(factor.0, GaussianRational::one());
        assert_eq!(l, 2);
    }

    #[test]
    fn split_is_invariant_under_monomial_twist() {
        // Twist by a unimodular substitution (with scalars): structural data
        // must not change.
        let w = IntMatrix::from_i64_rows(&[&[1, 2, 0], &[1, 3, 0], &[0, 1, 1]]);
        assert!(w.is_unimodular());
        let lam = ScalarTuple::new(vec![
            GaussianRational::from_int(2),
            GaussianRational::i(),
            GaussianRational::from_parts(-1, 3, 0, 1),
        ]);
        let twisted = crate::laurent::monomial_substitute(&h2_in_rank3(), &w, &lam).unwrap();
        let split = split_torus_factor(&[twisted], 3).unwrap();
        assert_eq!(split.torus_rank, 1);
        assert_eq!(split.residual_generators[0].num_terms(), 3);
        let q = quasitorus_hx(&lattice_mx(&split.residual_generators).unwrap(), 2).unwrap();
        assert!(q.is_trivial());
    }

    #[test]
    fn unit_generator_is_rejected() {
        let unit = LaurentPoly::monomial(
            2,
            LatticeVector::from_i64(&[1, 0]),
            GaussianRational::from_int(3),
        );
        assert_eq!(
            split_torus_factor(&[unit], 2),
            Err(StructureError::UnitGenerator { index: 0 })
        );
    }

    #[test]
    fn wrong_lattice_trips_semi_invariance_check() {
        // Feed the splitter a sublattice that misses one support difference:
        // the residual cannot drop the extra coordinate.
        let g = h2();
        let too_small = vec![LatticeVector::from_i64(&[1, 0])];
        assert_eq!(
            split_with_lattice(&[g], &too_small, 2),
            Err(StructureError::NotSemiInvariant { index: 0 })
        );
    }
}
