//! Laurent polynomials over Q(i) with dense integer exponent vectors.
//!
//! A polynomial of ambient rank `r` is a finite sum `Σ α_m χ^m` where each
//! exponent `m` is a vector of `r` integers and `χ^m` denotes the monomial
//! `t_1^{m_1} ⋯ t_r^{m_r}`. Terms are keyed by exponent in a `BTreeMap`, so
//! iteration order is lexicographic with the most significant coordinate
//! first; zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::gaussian::GaussianRational;
use crate::zlattice::IntMatrix;

/// A point of the exponent lattice Z^r.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LatticeVector {
    coords: Vec<BigInt>,
}

impl LatticeVector {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticeVector { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(len: usize) -> Self {
        LatticeVector::new(vec![BigInt::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &BigInt {
        &self.coords[i]
    }

    pub fn add(&self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.len(), rhs.len(), "lattice vector length mismatch");
        LatticeVector::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.len(), rhs.len(), "lattice vector length mismatch");
        LatticeVector::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector::new(self.coords.iter().map(|c| -c).collect())
    }

    /// First `n` coordinates.
    pub fn truncate(&self, n: usize) -> LatticeVector {
        LatticeVector::new(self.coords[..n].to_vec())
    }

    /// Extend with trailing zeros up to length `n`.
    pub fn pad(&self, n: usize) -> LatticeVector {
        let mut coords = self.coords.clone();
        coords.resize(n, BigInt::zero());
        LatticeVector::new(coords)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// A tuple of nonzero scalars: a point of the torus (K*)^r over Q(i).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScalarTuple {
    values: Vec<GaussianRational>,
}

impl ScalarTuple {
    /// Panics if any entry is zero (torus points have invertible coordinates).
    pub fn new(values: Vec<GaussianRational>) -> Self {
        Self::try_new(values).expect("scalar tuple entries must be nonzero")
    }

    pub fn try_new(values: Vec<GaussianRational>) -> Result<Self, LaurentError> {
        if values.iter().any(|v| v.is_zero()) {
            return Err(LaurentError::ZeroScalar);
        }
        Ok(ScalarTuple { values })
    }

    pub fn ones(len: usize) -> Self {
        ScalarTuple {
            values: vec![GaussianRational::one(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[GaussianRational] {
        &self.values
    }

    pub fn get(&self, i: usize) -> &GaussianRational {
        &self.values[i]
    }

    /// The character value `χ^m(self) = Π self_i^{m_i}` (exact; negative
    /// exponents divide).
    pub fn character(&self, m: &LatticeVector) -> GaussianRational {
        assert_eq!(self.len(), m.len(), "character/point length mismatch");
        let mut acc = GaussianRational::one();
        for (v, e) in self.values.iter().zip(m.coords()) {
            if !e.is_zero() {
                acc = &acc * &v.pow(e);
            }
        }
        acc
    }

    /// Componentwise product.
    pub fn mul(&self, rhs: &ScalarTuple) -> ScalarTuple {
        assert_eq!(self.len(), rhs.len(), "scalar tuple length mismatch");
        ScalarTuple {
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }
}

impl fmt::Display for ScalarTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, ")")
    }
}

/// Errors from Laurent polynomial operations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LaurentError {
    /// Operands live in different ambient ranks.
    RankMismatch { expected: usize, found: usize },
    /// A substitution matrix was not square of the ambient rank.
    BadMatrixShape { rows: usize, cols: usize, rank: usize },
    /// A substitution matrix had determinant other than ±1.
    NotUnimodular,
    /// The operation requires a nonzero polynomial.
    ZeroPolynomial,
    /// The operation requires a nonempty input list.
    EmptyInput,
    /// A scalar tuple entry was zero.
    ZeroScalar,
}

impl fmt::Display for LaurentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaurentError::RankMismatch { expected, found } => {
                write!(f, "ambient rank mismatch: expected {}, found {}", expected, found)
            }
            LaurentError::BadMatrixShape { rows, cols, rank } => write!(
                f,
                "substitution matrix is {}x{} but the ambient rank is {}",
                rows, cols, rank
            ),
            LaurentError::NotUnimodular => {
                write!(f, "substitution matrix must have determinant ±1")
            }
            LaurentError::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            LaurentError::EmptyInput => write!(f, "operation requires a nonempty input list"),
            LaurentError::ZeroScalar => write!(f, "scalar tuple entries must be nonzero"),
        }
    }
}

impl std::error::Error for LaurentError {}

/// A Laurent polynomial `Σ α_m χ^m` of fixed ambient rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    rank: usize,
    terms: BTreeMap<LatticeVector, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rank: usize, value: GaussianRational) -> Self {
        let mut p = LaurentPoly::zero(rank);
        p.add_term(LatticeVector::zero(rank), value);
        p
    }

    pub fn one(rank: usize) -> Self {
        LaurentPoly::constant(rank, GaussianRational::one())
    }

    pub fn monomial(rank: usize, exponent: LatticeVector, coeff: GaussianRational) -> Self {
        assert_eq!(exponent.len(), rank, "exponent length must equal rank");
        let mut p = LaurentPoly::zero(rank);
        p.add_term(exponent, coeff);
        p
    }

    /// Build from (exponent, coefficient) pairs; like terms combine and zero
    /// coefficients drop.
    pub fn from_terms<I>(rank: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (LatticeVector, GaussianRational)>,
    {
        let mut p = LaurentPoly::zero(rank);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Convenience constructor from `(exponent, (re_num, re_den, im_num, im_den))`.
    #[allow(clippy::type_complexity)]
    pub fn from_i64_terms(rank: usize, terms: &[(&[i64], (i64, i64, i64, i64))]) -> Self {
        LaurentPoly::from_terms(
            rank,
            terms.iter().map(|(m, (rn, rd, in_, id))| {
                (
                    LatticeVector::from_i64(m),
                    GaussianRational::from_parts(*rn, *rd, *in_, *id),
                )
            }),
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Add `coeff · χ^exponent`, combining with any existing term.
    pub fn add_term(&mut self, exponent: LatticeVector, coeff: GaussianRational) {
        assert_eq!(exponent.len(), self.rank, "exponent length must equal rank");
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponent) {
            Some(existing) => {
                let sum = &*existing + &coeff;
                if sum.is_zero() {
                    self.terms.remove(&exponent);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exponent, coeff);
            }
        }
    }

    pub fn coeff(&self, exponent: &LatticeVector) -> Option<&GaussianRational> {
        self.terms.get(exponent)
    }

    /// Support points in increasing lexicographic order.
    pub fn support(&self) -> Vec<LatticeVector> {
        self.terms.keys().cloned().collect()
    }

    /// Terms in increasing lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &GaussianRational)> {
        self.terms.iter()
    }

    /// Lexicographically smallest support point, if any.
    pub fn min_support(&self) -> Option<&LatticeVector> {
        self.terms.keys().next()
    }

    pub fn add(&self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in addition");
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in multiplication");
        let mut out = LaurentPoly::zero(self.rank);
        for (m, c) in self.terms() {
            for (n, d) in rhs.terms() {
                out.add_term(m.add(n), c * d);
            }
        }
        out
    }

    /// Multiply by the unit monomial `coeff · χ^shift`.
    pub fn mul_monomial(&self, coeff: &GaussianRational, shift: &LatticeVector) -> LaurentPoly {
        assert!(!coeff.is_zero(), "unit monomial coefficient must be nonzero");
        LaurentPoly {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.add(shift), c * coeff))
                .collect(),
        }
    }

    /// Evaluate at a torus point (all coordinates nonzero), exactly.
    pub fn eval(&self, point: &ScalarTuple) -> GaussianRational {
        assert_eq!(point.len(), self.rank, "evaluation point length must equal rank");
        let mut acc = GaussianRational::zero();
        for (m, c) in self.terms() {
            acc = &acc + &(c * &point.character(m));
        }
        acc
    }

    /// Apply the exponent map `m ↦ W·m` to every term, coefficients untouched.
    /// This is the pure lattice half of [`monomial_substitute`].
    pub fn map_exponents(&self, w: &IntMatrix) -> LaurentPoly {
        assert_eq!(w.cols(), self.rank, "matrix width must equal rank");
        LaurentPoly::from_terms(
            w.rows(),
            self.terms.iter().map(|(m, c)| (w.mul_vec(m), c.clone())),
        )
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical form accepted by the expression parser: terms in increasing
    /// lexicographic exponent order, coefficients in the canonical Q(i) form,
    /// explicit `*` between factors, `^` for exponents other than 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            let (negative, mag) = coefficient_sign_split(c);
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let vars = monomial_string(m);
            match (mag.is_one(), vars.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{}", vars)?,
                (false, true) => write!(f, "{}", mag)?,
                (false, false) => write!(f, "{}*{}", mag, vars)?,
            }
        }
        Ok(())
    }
}

/// Split a coefficient into a printable sign and magnitude. Real and purely
/// imaginary values carry their sign out front; mixed values print whole in
/// parentheses with a positive sign.
fn coefficient_sign_split(c: &GaussianRational) -> (bool, GaussianRational) {
    if c.is_real() {
        if c.re().is_negative() {
            return (true, -c);
        }
        return (false, c.clone());
    }
    if c.re().is_zero() {
        if c.im().is_negative() {
            return (true, -c);
        }
        return (false, c.clone());
    }
    (false, c.clone())
}

fn monomial_string(m: &LatticeVector) -> String {
    let mut parts = Vec::new();
    for (k, e) in m.coords().iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        if e.is_one() {
            parts.push(format!("t{}", k + 1));
        } else {
            parts.push(format!("t{}^{}", k + 1, e));
        }
    }
    parts.join("*")
}

/// A monomial self-map of the torus: coordinate `i` maps to
/// `scalars_i · Π_j t_j^{matrix[i][j]}`. Unimodular `matrix` gives an
/// automorphism.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialMap {
    pub matrix: IntMatrix,
    pub scalars: ScalarTuple,
}

impl MonomialMap {
    pub fn new(matrix: IntMatrix, scalars: ScalarTuple) -> Self {
        assert_eq!(matrix.rows(), matrix.cols(), "monomial map matrix must be square");
        assert_eq!(matrix.rows(), scalars.len(), "matrix size must match scalar count");
        MonomialMap { matrix, scalars }
    }

    pub fn identity(rank: usize) -> Self {
        MonomialMap::new(IntMatrix::identity(rank), ScalarTuple::ones(rank))
    }

    /// `self ∘ other` (apply `other` first). The composite matrix is
    /// `self.matrix · other.matrix`; the composite scalar at coordinate `i`
    /// is `self.scalars_i · Π_j other.scalars_j^{self.matrix[i][j]}`.
    pub fn compose(&self, other: &MonomialMap) -> MonomialMap {
        let n = self.matrix.rows();
        assert_eq!(n, other.matrix.rows(), "monomial map rank mismatch");
        let matrix = self.matrix.mul(&other.matrix);
        let mut scalars = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.matrix.row(i);
            scalars.push(self.scalars.get(i) * &other.scalars.character(&row));
        }
        MonomialMap::new(matrix, ScalarTuple::new(scalars))
    }

    /// Image of a torus point.
    pub fn apply_point(&self, point: &ScalarTuple) -> ScalarTuple {
        let n = self.matrix.rows();
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.matrix.row(i);
            values.push(self.scalars.get(i) * &point.character(&row));
        }
        ScalarTuple::new(values)
    }

    /// Pullback of a polynomial along this map; see [`monomial_substitute`].
    pub fn pullback(&self, p: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        monomial_substitute(p, &self.matrix, &self.scalars)
    }
}

/// Pull a polynomial back along the monomial torus map whose `i`-th coordinate
/// image is `lam_i · Π_j t_j^{a[i][j]}`: each term `α_m χ^m` maps to
/// `α_m · χ^m(lam) · χ^{Aᵀm}` (the exponent picks up the transpose because the
/// exponent of `t_j` in the image of `χ^m` is `Σ_i m_i a_{ij}`).
///
/// Requires `a` square of the polynomial's rank with determinant ±1, and `lam`
/// of matching length.
pub fn monomial_substitute(
    p: &LaurentPoly,
    a: &IntMatrix,
    lam: &ScalarTuple,
) -> Result<LaurentPoly, LaurentError> {
    let r = p.rank();
    if a.rows() != r || a.cols() != r {
        return Err(LaurentError::BadMatrixShape {
            rows: a.rows(),
            cols: a.cols(),
            rank: r,
        });
    }
    if lam.len() != r {
        return Err(LaurentError::RankMismatch {
            expected: r,
            found: lam.len(),
        });
    }
    if !a.is_unimodular() {
        return Err(LaurentError::NotUnimodular);
    }
    let at = a.transpose();
    Ok(LaurentPoly::from_terms(
        r,
        p.terms()
            .map(|(m, c)| (at.mul_vec(m), c * &lam.character(m))),
    ))
}

/// If `p = α · χ^v · q` for a (unique) nonzero scalar `α` and lattice vector
/// `v`, return `(α, v)`; otherwise `None`. Errors on zero input.
pub fn proportional_monomial_factor(
    p: &LaurentPoly,
    q: &LaurentPoly,
) -> Result<Option<(GaussianRational, LatticeVector)>, LaurentError> {
    if p.is_zero() || q.is_zero() {
        return Err(LaurentError::ZeroPolynomial);
    }
    if p.rank() != q.rank() {
        return Err(LaurentError::RankMismatch {
            expected: q.rank(),
            found: p.rank(),
        });
    }
    if p.num_terms() != q.num_terms() {
        return Ok(None);
    }
    // Translation by v preserves lexicographic order, so the minimal terms
    // must correspond; that pins both candidates.
    let mp = p.min_support().unwrap().clone();
    let mq = q.min_support().unwrap().clone();
    let v = mp.sub(&mq);
    let alpha = p.coeff(&mp).unwrap() / q.coeff(&mq).unwrap();
    for (m, c) in q.terms() {
        match p.coeff(&m.add(&v)) {
            Some(d) if *d == &alpha * c => {}
            _ => return Ok(None),
        }
    }
    Ok(Some((alpha, v)))
}

/// For each polynomial, the differences `m_i − m_0` of its support points from
/// the lexicographically smallest one, concatenated across the input list.
/// These generate the same lattice as all pairwise support differences.
/// Errors on an empty list, a zero polynomial, or mixed ranks.
pub fn support_differences(polys: &[LaurentPoly]) -> Result<Vec<LatticeVector>, LaurentError> {
    if polys.is_empty() {
        return Err(LaurentError::EmptyInput);
    }
    let rank = polys[0].rank();
    let mut out = Vec::new();
    for p in polys {
        if p.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        if p.rank() != rank {
            return Err(LaurentError::RankMismatch {
                expected: rank,
                found: p.rank(),
            });
        }
        let support = p.support();
        let base = &support[0];
        for m in &support[1..] {
            out.push(m.sub(base));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// h = t1*t2 - t1 - 1, the running rank-2 example.
    pub fn sample_h2() -> LaurentPoly {
        LaurentPoly::from_i64_terms(
            2,
            &[
                (&[1, 1], (1, 1, 0, 1)),
                (&[1, 0], (-1, 1, 0, 1)),
                (&[0, 0], (-1, 1, 0, 1)),
            ],
        )
    }

    /// h = t1^2*t3 + t2^2*t3 - t3 - 1, the running rank-3 example.
    pub fn sample_h3() -> LaurentPoly {
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

    #[test]
    fn term_storage_is_canonical() {
        let mut p = LaurentPoly::zero(2);
        p.add_term(LatticeVector::from_i64(&[1, 0]), GaussianRational::from_int(2));
        p.add_term(LatticeVector::from_i64(&[1, 0]), GaussianRational::from_int(-2));
        assert!(p.is_zero());
        p.add_term(LatticeVector::from_i64(&[0, 1]), GaussianRational::i());
        p.add_term(LatticeVector::from_i64(&[0, 1]), GaussianRational::i());
        assert_eq!(
            p.coeff(&LatticeVector::from_i64(&[0, 1])),
            Some(&GaussianRational::from_parts(0, 1, 2, 1))
        );
        assert_eq!(p.num_terms(), 1);
    }

    #[test]
    fn support_is_sorted_lex() {
        let h = sample_h2();
        assert_eq!(
            h.support(),
            vec![
                LatticeVector::from_i64(&[0, 0]),
                LatticeVector::from_i64(&[1, 0]),
                LatticeVector::from_i64(&[1, 1]),
            ]
        );
        assert_eq!(h.min_support(), Some(&LatticeVector::from_i64(&[0, 0])));
    }

    #[test]
    fn substitute_identity_fixes_everything() {
        let h = sample_h2();
        let out = monomial_substitute(&h, &IntMatrix::identity(2), &ScalarTuple::ones(2)).unwrap();
        assert_eq!(out, h);
    }

    #[test]
    fn substitute_psi1_fixes_sample_h2() {
        // psi1: t1 -> -t1*t2, t2 -> t2^-1; rows of the matrix give the
        // coordinate images, the scalar tuple the leading units.
        let h = sample_h2();
        let a = IntMatrix::from_i64_rows(&[&[1, 1], &[0, -1]]);
        let lam = ScalarTuple::new(vec![
            GaussianRational::from_int(-1),
            GaussianRational::one(),
        ]);
        let out = monomial_substitute(&h, &a, &lam).unwrap();
        assert_eq!(out, h);
    }

    #[test]
    fn substitute_psi2_fixes_sample_h3() {
        // psi2: t1 -> -t2^-1, t2 -> i*t1*t2^-1, t3 -> -t2^2*t3.
        let h = sample_h3();
        let a = IntMatrix::from_i64_rows(&[&[0, -1, 0], &[1, -1, 0], &[0, 2, 1]]);
        let lam = ScalarTuple::new(vec![
            GaussianRational::from_int(-1),
            GaussianRational::i(),
            GaussianRational::from_int(-1),
        ]);
        let out = monomial_substitute(&h, &a, &lam).unwrap();
        assert_eq!(out, h);
    }

    #[test]
    fn substitute_agrees_with_point_evaluation() {
        // Pullback then evaluate = evaluate at the image point.
        let h = sample_h2();
        let a = IntMatrix::from_i64_rows(&[&[1, 1], &[0, -1]]);
        let lam = ScalarTuple::new(vec![
            GaussianRational::from_int(-1),
            GaussianRational::one(),
        ]);
        let map = MonomialMap::new(a.clone(), lam.clone());
        let pulled = monomial_substitute(&h, &a, &lam).unwrap();
        let points = [
            ScalarTuple::new(vec![
                GaussianRational::from_parts(1, 2, 1, 1),
                GaussianRational::from_int(3),
            ]),
            ScalarTuple::new(vec![
                GaussianRational::i(),
                GaussianRational::from_parts(-2, 3, 1, 5),
            ]),
        ];
        for x in &points {
            assert_eq!(pulled.eval(x), h.eval(&map.apply_point(x)));
        }
    }

    #[test]
    fn substitute_rejects_non_unimodular() {
        let h = sample_h2();
        let a = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]);
        assert_eq!(
            monomial_substitute(&h, &a, &ScalarTuple::ones(2)),
            Err(LaurentError::NotUnimodular)
        );
    }

    #[test]
    fn proportional_factor_recovers_shift() {
        let h = sample_h2();
        let alpha = GaussianRational::from_parts(0, 1, 1, 2); // i/2
        let v = LatticeVector::from_i64(&[-1, 2]);
        let p = h.mul_monomial(&alpha, &v);
        let (a, w) = proportional_monomial_factor(&p, &h).unwrap().unwrap();
        assert_eq!(a, alpha);
        assert_eq!(w, v);
    }

    #[test]
    fn proportional_factor_absent_cases() {
        let h = sample_h2();
        // Extra term: support sizes differ.
        let mut p = h.clone();
        p.add_term(LatticeVector::from_i64(&[5, 5]), GaussianRational::one());
        assert_eq!(proportional_monomial_factor(&p, &h).unwrap(), None);
        // Same support, one coefficient off.
        let mut q = h.clone();
        q.add_term(LatticeVector::from_i64(&[1, 1]), GaussianRational::one());
        assert_eq!(proportional_monomial_factor(&q, &h).unwrap(), None);
        // Zero input is an error, not an absence.
        assert_eq!(
            proportional_monomial_factor(&LaurentPoly::zero(2), &h),
            Err(LaurentError::ZeroPolynomial)
        );
    }

    #[test]
    fn support_differences_from_lex_minimum() {
        let h = sample_h2();
        assert_eq!(
            support_differences(std::slice::from_ref(&h)).unwrap(),
            vec![
                LatticeVector::from_i64(&[1, 0]),
                LatticeVector::from_i64(&[1, 1]),
            ]
        );
        let single = LaurentPoly::monomial(
            2,
            LatticeVector::from_i64(&[2, 3]),
            GaussianRational::from_int(5),
        );
        assert_eq!(support_differences(&[single]).unwrap(), Vec::<LatticeVector>::new());
        let h3 = sample_h3();
        assert_eq!(
            support_differences(&[h3]).unwrap(),
            vec![
                LatticeVector::from_i64(&[0, 0, 1]),
                LatticeVector::from_i64(&[0, 2, 1]),
                LatticeVector::from_i64(&[2, 0, 1]),
            ]
        );
    }

    #[test]
    fn monomial_map_composition_matches_pullback_order() {
        // Pulling back along f then along g equals pulling back along f∘g:
        // subst_g(subst_f(p)) corresponds to the coordinate map f∘g... check
        // via evaluation instead of symbol pushing.
        let h = sample_h2();
        let f = MonomialMap::new(
            IntMatrix::from_i64_rows(&[&[1, 1], &[0, -1]]),
            ScalarTuple::new(vec![GaussianRational::from_int(-1), GaussianRational::one()]),
        );
        let g = MonomialMap::new(
            IntMatrix::from_i64_rows(&[&[0, 1], &[-1, -1]]),
            ScalarTuple::new(vec![GaussianRational::from_int(-1), GaussianRational::one()]),
        );
        let fg = f.compose(&g);
        let x = ScalarTuple::new(vec![
            GaussianRational::from_parts(2, 1, -1, 3),
            GaussianRational::from_parts(0, 1, 5, 4),
        ]);
        assert_eq!(fg.apply_point(&x), f.apply_point(&g.apply_point(&x)));
        // Pullback composes contravariantly.
        let two_step = g.pullback(&f.pullback(&h).unwrap()).unwrap();
        let one_step = f.compose(&g).pullback(&h).unwrap();
        assert_eq!(two_step.eval(&x), one_step.eval(&x));
        assert_eq!(two_step, one_step);
    }

    #[test]
    fn display_roundtrip_forms() {
        let h = sample_h2();
        assert_eq!(h.to_string(), "-1 - t1 + t1*t2");
        let p = LaurentPoly::from_terms(
            2,
            vec![
                (
                    LatticeVector::from_i64(&[1, -1]),
                    GaussianRational::i(),
                ),
                (
                    LatticeVector::from_i64(&[0, 0]),
                    GaussianRational::from_parts(1, 2, -3, 4),
                ),
            ],
        );
        assert_eq!(p.to_string(), "(1/2-3/4i) + i*t1*t2^-1");
        assert_eq!(LaurentPoly::zero(3).to_string(), "0");
    }
}
