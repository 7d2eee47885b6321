//! The finite symmetry group of a hypersurface inside its torus: unimodular
//! affine self-maps of the exponent lattice preserving the Newton support and
//! compatible with the coefficients.
//!
//! A support permutation extends to at most one affine map because the support
//! differences span the ambient lattice over Q. A candidate `φ` belongs to the
//! group when, additionally, for every integer relation `Σ a_m·m = 0` with
//! `Σ a_m = 0` among the support points, the coefficient products match:
//! `Π α_m^{a_m} = Π α_{φ(m)}^{a_m}`. Each accepted element lifts to a torus
//! automorphism `ψ` with `ψ*(χ^m) = χ^m(λ)·χ^{dφ(m)}`; the lift is recorded as
//! a certificate fixing the character values of `λ` on a basis of the
//! difference lattice, checkable by coefficient ratios alone.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::gaussian::GaussianRational;
use crate::laurent::{
    monomial_substitute, proportional_monomial_factor, LatticeVector, LaurentError, LaurentPoly,
    ScalarTuple,
};
use crate::zlattice::{
    hnf, kernel_basis, snf, solve_integer_system, IntMatrix, SublatticeSolver, ZLatticeError,
};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GaffError {
    Laurent(LaurentError),
    Lattice(ZLatticeError),
    /// The support exceeds the configured enumeration bound.
    SupportTooLarge { size: usize, bound: usize },
    /// Support differences do not span the ambient lattice over Q; split off
    /// the torus factor first.
    NotFullRank,
    /// A map claimed to preserve the support does not.
    SupportNotPreserved,
    /// A certificate is structurally unusable (shape mismatch, dependent or
    /// non-spanning basis).
    CorruptCertificate(String),
    /// The map is not a symmetry of the hypersurface: its certificate fails.
    NotInGroup,
}

impl fmt::Display for GaffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaffError::Laurent(e) => write!(f, "{}", e),
            GaffError::Lattice(e) => write!(f, "{}", e),
            GaffError::SupportTooLarge { size, bound } => write!(
                f,
                "support has {} points, above the enumeration bound {} (raise --max-support)",
                size, bound
            ),
            GaffError::NotFullRank => write!(
                f,
                "support differences do not span the ambient lattice; split the torus factor first"
            ),
            GaffError::SupportNotPreserved => {
                write!(f, "the affine map does not preserve the support")
            }
            GaffError::CorruptCertificate(what) => write!(f, "corrupt certificate: {}", what),
            GaffError::NotInGroup => {
                write!(f, "the map is not a symmetry of the hypersurface")
            }
        }
    }
}

impl std::error::Error for GaffError {}

impl From<LaurentError> for GaffError {
    fn from(e: LaurentError) -> Self {
        GaffError::Laurent(e)
    }
}

impl From<ZLatticeError> for GaffError {
    fn from(e: ZLatticeError) -> Self {
        GaffError::Lattice(e)
    }
}

/// A permutation of `{0, …, n−1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Self {
        let mut seen = vec![false; images.len()];
        for &im in &images {
            assert!(im < images.len() && !seen[im], "not a permutation");
            seen[im] = true;
        }
        Permutation { images }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i == im)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im] = i;
        }
        Permutation { images }
    }

    /// Cycles of length ≥ 2, each starting at its smallest element, sorted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] || self.images[start] == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.images[start];
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.images[next];
            }
            out.push(cycle);
        }
        out
    }

    /// Multiplicative order: least common multiple of the cycle lengths.
    pub fn order(&self) -> usize {
        self.cycles()
            .iter()
            .map(|c| c.len())
            .fold(1usize, num_integer::lcm)
    }

    /// Cycle notation over the indices, `id` for the identity.
    pub fn cycle_string(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "id".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let inner = c
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                format!("({})", inner)
            })
            .collect()
    }
}

/// An affine self-map of the exponent lattice: `m ↦ linear·m + translation`,
/// with `linear` unimodular.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineLatticeMap {
    pub linear: IntMatrix,
    pub translation: LatticeVector,
}

impl AffineLatticeMap {
    pub fn identity(rank: usize) -> Self {
        AffineLatticeMap {
            linear: IntMatrix::identity(rank),
            translation: LatticeVector::zero(rank),
        }
    }

    pub fn apply(&self, m: &LatticeVector) -> LatticeVector {
        self.linear.mul_vec(m).add(&self.translation)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineLatticeMap) -> AffineLatticeMap {
        AffineLatticeMap {
            linear: self.linear.mul(&other.linear),
            translation: self.linear.mul_vec(&other.translation).add(&self.translation),
        }
    }

    pub fn inverse(&self) -> AffineLatticeMap {
        let inv = self.linear.inverse_unimodular();
        AffineLatticeMap {
            translation: inv.mul_vec(&self.translation).neg(),
            linear: inv,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.translation.is_zero() && self.linear == IntMatrix::identity(self.linear.rows())
    }
}

/// Tuning knobs for the support-permutation search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GaffConfig {
    /// Largest admissible support size (the search space is all support
    /// permutations, pruned by partial affine consistency).
    pub max_support: usize,
    /// Worker threads for evaluating disjoint first-image branches.
    pub threads: usize,
}

impl Default for GaffConfig {
    fn default() -> Self {
        GaffConfig {
            max_support: 9,
            threads: 1,
        }
    }
}

/// The full symmetry group: elements in a canonical order (sorted by their
/// support permutation), with the support they act on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaffGroup {
    support: Vec<LatticeVector>,
    elements: Vec<AffineLatticeMap>,
    perm_action: Vec<Permutation>,
}

impl GaffGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn support(&self) -> &[LatticeVector] {
        &self.support
    }

    pub fn elements(&self) -> &[AffineLatticeMap] {
        &self.elements
    }

    pub fn perm_action(&self) -> &[Permutation] {
        &self.perm_action
    }

    pub fn position_of(&self, perm: &Permutation) -> Option<usize> {
        self.perm_action.binary_search(perm).ok()
    }

    pub fn is_abelian(&self) -> bool {
        let ps = &self.perm_action;
        for a in ps {
            for b in ps {
                if a.compose(b) != b.compose(a) {
                    return false;
                }
            }
        }
        true
    }

    /// Orders of all elements, ascending.
    pub fn element_orders(&self) -> Vec<usize> {
        let mut orders: Vec<usize> = self.perm_action.iter().map(|p| p.order()).collect();
        orders.sort_unstable();
        orders
    }
}

/// Basis of the lattice of integer relation vectors `a` with `Σ a_i·m_i = 0`
/// and `Σ a_i = 0` over the support of `h` (in lexicographic support order).
pub fn relation_lattice_basis(h: &LaurentPoly) -> Result<Vec<LatticeVector>, GaffError> {
    if h.is_zero() {
        return Err(GaffError::Laurent(LaurentError::ZeroPolynomial));
    }
    let support = h.support();
    let r = h.rank();
    let mut rows: Vec<Vec<BigInt>> = (0..r)
        .map(|c| support.iter().map(|m| m.get(c).clone()).collect())
        .collect();
    rows.push(vec![BigInt::one(); support.len()]);
    Ok(kernel_basis(&IntMatrix::from_rows(rows)))
}

/// Check the multiplicative coefficient condition for `phi` on all given
/// relation vectors: `Π α_m^{a_m} = Π α_{φ(m)}^{a_m}`. Errors when `phi` does
/// not permute the support.
pub fn coefficient_condition_holds(
    h: &LaurentPoly,
    phi: &AffineLatticeMap,
    relations: &[LatticeVector],
) -> Result<bool, GaffError> {
    let ctx = SupportContext::new(h)?;
    let sigma = ctx.permutation_of(phi)?;
    Ok(ctx.relations_hold(&sigma, relations))
}

/// Shared support bookkeeping: sorted points, their coefficients, and an
/// index for membership lookups.
struct SupportContext {
    support: Vec<LatticeVector>,
    coeffs: Vec<GaussianRational>,
    index: BTreeMap<LatticeVector, usize>,
}

impl SupportContext {
    fn new(h: &LaurentPoly) -> Result<Self, GaffError> {
        if h.is_zero() {
            return Err(GaffError::Laurent(LaurentError::ZeroPolynomial));
        }
        let support = h.support();
        let coeffs = support
            .iter()
            .map(|m| h.coeff(m).expect("support point has a coefficient").clone())
            .collect();
        let index = support
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(SupportContext {
            support,
            coeffs,
            index,
        })
    }

    fn n(&self) -> usize {
        self.support.len()
    }

    fn permutation_of(&self, phi: &AffineLatticeMap) -> Result<Permutation, GaffError> {
        let mut images = Vec::with_capacity(self.n());
        let mut seen = vec![false; self.n()];
        for m in &self.support {
            let im = phi.apply(m);
            let Some(&idx) = self.index.get(&im) else {
                return Err(GaffError::SupportNotPreserved);
            };
            if seen[idx] {
                return Err(GaffError::SupportNotPreserved);
            }
            seen[idx] = true;
            images.push(idx);
        }
        Ok(Permutation::new(images))
    }

    fn relations_hold(&self, sigma: &Permutation, relations: &[LatticeVector]) -> bool {
        relations.iter().all(|a| {
            let mut lhs = GaussianRational::one();
            let mut rhs = GaussianRational::one();
            for i in 0..self.n() {
                let e = a.get(i);
                if e.is_zero() {
                    continue;
                }
                lhs = &lhs * &self.coeffs[i].pow(e);
                rhs = &rhs * &self.coeffs[sigma.apply(i)].pow(e);
            }
            lhs == rhs
        })
    }
}

/// The unique affine unimodular extension of the support permutation, when it
/// exists. The support differences must span the ambient lattice over Q (the
/// map is then determined by the permutation).
pub fn affine_extension(
    support: &[LatticeVector],
    perm: &Permutation,
) -> Option<AffineLatticeMap> {
    assert_eq!(support.len(), perm.len(), "permutation size must match support");
    assert!(!support.is_empty(), "support must be nonempty");
    let r = support[0].len();
    let base = &support[0];
    let target_base = &support[perm.apply(0)];
    let mut fit = AffineFit::new(r);
    for i in 1..support.len() {
        let d = support[i].sub(base);
        let e = support[perm.apply(i)].sub(target_base);
        if fit.extend(&d, &e, i).is_err() {
            return None;
        }
    }
    assert_eq!(
        fit.rank(),
        r,
        "support differences must span the ambient lattice over Q"
    );
    let linear = fit.solve_integer_linear(|i| {
        (
            support[i].sub(base),
            support[perm.apply(i)].sub(target_base),
        )
    })?;
    if !linear.is_unimodular() {
        return None;
    }
    let translation = target_base.sub(&linear.mul_vec(base));
    let phi = AffineLatticeMap {
        linear,
        translation,
    };
    // The fit is exact, but re-checking every point is cheap insurance.
    for i in 0..support.len() {
        if phi.apply(&support[i]) != support[perm.apply(i)] {
            return None;
        }
    }
    Some(phi)
}

struct Inconsistent;

/// Incremental rational elimination for partially assigned affine maps: rows
/// are (difference | image-difference) pairs, reduced on the difference part.
/// Inserting a dependent difference whose image fails the forced linear
/// combination signals an inconsistent prefix.
#[derive(Clone)]
struct AffineFit {
    dim: usize,
    rows: Vec<(Vec<BigRational>, Vec<BigRational>)>,
    pivots: Vec<usize>,
    /// Tags (point indices) of the rows that entered as independent.
    frame: Vec<usize>,
}

impl AffineFit {
    fn new(dim: usize) -> Self {
        AffineFit {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            frame: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Returns `Ok(true)` if the pair was independent (rank grew), `Ok(false)`
    /// if it was consistent but dependent, `Err` if it contradicts the rows.
    fn extend(
        &mut self,
        d: &LatticeVector,
        e: &LatticeVector,
        tag: usize,
    ) -> Result<bool, Inconsistent> {
        let mut dd: Vec<BigRational> = d
            .coords()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut ee: Vec<BigRational> = e
            .coords()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        for (k, (rd, re)) in self.rows.iter().enumerate() {
            let p = self.pivots[k];
            if dd[p].is_zero() {
                continue;
            }
            let f = &dd[p] / &rd[p];
            for j in 0..self.dim {
                dd[j] = &dd[j] - &(&f * &rd[j]);
                ee[j] = &ee[j] - &(&f * &re[j]);
            }
        }
        match (0..self.dim).find(|&j| !dd[j].is_zero()) {
            Some(pivot) => {
                self.rows.push((dd, ee));
                self.pivots.push(pivot);
                self.frame.push(tag);
                Ok(true)
            }
            None => {
                if ee.iter().all(|x| x.is_zero()) {
                    Ok(false)
                } else {
                    Err(Inconsistent)
                }
            }
        }
    }

    /// Once the rank is full, solve `L·d_i = e_i` over Q from the frame pairs
    /// (fetched by tag via `pair_of`) and return `L` if it is integral.
    #[allow(clippy::needless_range_loop)] // elimination mixes rows: index form is clearest
    fn solve_integer_linear<F>(&self, pair_of: F) -> Option<IntMatrix>
    where
        F: Fn(usize) -> (LatticeVector, LatticeVector),
    {
        let r = self.dim;
        assert_eq!(self.rank(), r, "linear part is not yet determined");
        // Augmented [Dᵀ | Eᵀ]; Gauss–Jordan on the left block leaves Lᵀ on
        // the right.
        let mut m: Vec<Vec<BigRational>> = Vec::with_capacity(r);
        for &tag in &self.frame {
            let (d, e) = pair_of(tag);
            let row: Vec<BigRational> = d
                .coords()
                .iter()
                .chain(e.coords().iter())
                .map(|c| BigRational::from_integer(c.clone()))
                .collect();
            m.push(row);
        }
        for col in 0..r {
            let pivot_row = (col..r).find(|&i| !m[i][col].is_zero())?;
            m.swap(col, pivot_row);
            let p = m[col][col].clone();
            for j in col..2 * r {
                m[col][j] = &m[col][j] / &p;
            }
            for i in 0..r {
                if i == col || m[i][col].is_zero() {
                    continue;
                }
                let f = m[i][col].clone();
                for j in col..2 * r {
                    m[i][j] = &m[i][j] - &(&f * &m[col][j]);
                }
            }
        }
        // Right block rows are the rows of Lᵀ; transpose while converting.
        let mut linear = IntMatrix::zero(r, r);
        for i in 0..r {
            for j in 0..r {
                let q = &m[i][r + j];
                if !q.is_integer() {
                    return None;
                }
                linear.set(j, i, q.to_integer());
            }
        }
        Some(linear)
    }
}

/// Enumerate the symmetry group of `h` with default settings.
pub fn enumerate_gaff(h: &LaurentPoly) -> Result<GaffGroup, GaffError> {
    enumerate_gaff_with(h, &GaffConfig::default())
}

/// Enumerate the symmetry group of `h`: search all support permutations for
/// affine extensions passing the coefficient condition, pruning permutation
/// prefixes that already fail affine consistency. First-image branches are
/// independent and may run on multiple threads; the result is sorted into a
/// canonical (permutation-lexicographic) order either way.
pub fn enumerate_gaff_with(h: &LaurentPoly, config: &GaffConfig) -> Result<GaffGroup, GaffError> {
    let ctx = SupportContext::new(h)?;
    let n = ctx.n();
    if n > config.max_support {
        return Err(GaffError::SupportTooLarge {
            size: n,
            bound: config.max_support,
        });
    }
    let r = h.rank();
    let diffs: Vec<LatticeVector> = (1..n)
        .map(|i| ctx.support[i].sub(&ctx.support[0]))
        .collect();
    if diffs.is_empty() {
        return Err(GaffError::NotFullRank);
    }
    let (echelon, _) = hnf(&IntMatrix::from_row_vectors(&diffs));
    let rank = (0..echelon.rows()).filter(|&i| !echelon.row(i).is_zero()).count();
    if rank < r {
        return Err(GaffError::NotFullRank);
    }
    let relations = relation_lattice_basis(h)?;

    let search = Search {
        ctx: &ctx,
        relations: &relations,
        r,
    };
    let mut found: Vec<(Permutation, AffineLatticeMap)> = if config.threads > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .expect("thread pool construction");
        pool.install(|| {
            (0..n)
                .into_par_iter()
                .flat_map_iter(|u0| search.branch(u0))
                .collect()
        })
    } else {
        (0..n).flat_map(|u0| search.branch(u0)).collect()
    };
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let (perm_action, elements) = found.into_iter().unzip();
    Ok(GaffGroup {
        support: ctx.support,
        elements,
        perm_action,
    })
}

struct Search<'a> {
    ctx: &'a SupportContext,
    relations: &'a [LatticeVector],
    r: usize,
}

impl<'a> Search<'a> {
    /// All group elements whose permutation sends support point 0 to `u0`.
    fn branch(&self, u0: usize) -> Vec<(Permutation, AffineLatticeMap)> {
        let n = self.ctx.n();
        let mut used = vec![false; n];
        used[u0] = true;
        let mut images = vec![u0];
        let mut out = Vec::new();
        self.recurse(&mut images, &mut used, &AffineFit::new(self.r), &mut out);
        out
    }

    fn recurse(
        &self,
        images: &mut Vec<usize>,
        used: &mut Vec<bool>,
        fit: &AffineFit,
        out: &mut Vec<(Permutation, AffineLatticeMap)>,
    ) {
        let n = self.ctx.n();
        let k = images.len();
        debug_assert!(k < n, "determination must fire before the prefix is full");
        let d = self.ctx.support[k].sub(&self.ctx.support[0]);
        for u in 0..n {
            if used[u] {
                continue;
            }
            let e = self.ctx.support[u].sub(&self.ctx.support[images[0]]);
            let mut next_fit = fit.clone();
            match next_fit.extend(&d, &e, k) {
                Err(Inconsistent) => continue,
                Ok(grew) => {
                    images.push(u);
                    used[u] = true;
                    if grew && next_fit.rank() == self.r {
                        if let Some(found) = self.resolve(images, &next_fit) {
                            out.push(found);
                        }
                    } else {
                        self.recurse(images, used, &next_fit, out);
                    }
                    images.pop();
                    used[u] = false;
                }
            }
        }
    }

    /// The prefix now pins the affine map; recover it, force the remaining
    /// images, and keep the element if everything checks out.
    fn resolve(
        &self,
        images: &[usize],
        fit: &AffineFit,
    ) -> Option<(Permutation, AffineLatticeMap)> {
        let ctx = self.ctx;
        let n = ctx.n();
        let base = &ctx.support[0];
        let target_base = &ctx.support[images[0]];
        let linear = fit.solve_integer_linear(|i| {
            (
                ctx.support[i].sub(base),
                ctx.support[images[i]].sub(target_base),
            )
        })?;
        if !linear.is_unimodular() {
            return None;
        }
        let translation = target_base.sub(&linear.mul_vec(base));
        let phi = AffineLatticeMap {
            linear,
            translation,
        };
        let mut sigma = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for (j, m) in ctx.support.iter().enumerate() {
            let im = phi.apply(m);
            let &idx = ctx.index.get(&im)?;
            if seen[idx] {
                return None;
            }
            seen[idx] = true;
            debug_assert!(j >= images.len() || images[j] == idx);
            sigma.push(idx);
        }
        let sigma = Permutation::new(sigma);
        if !ctx.relations_hold(&sigma, self.relations) {
            return None;
        }
        Some((sigma, phi))
    }
}

/// A checkable witness that a support symmetry `φ` lifts to a torus
/// automorphism `ψ` with `ψ*(χ^m) = χ^m(λ)·χ^{dφ(m)}` and `ψ*(h)` a unit
/// monomial multiple of `h`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AutoCertificate {
    /// Exponent matrix of `ψ*`: row `i` holds the exponents of the image of
    /// the `i`-th coordinate, so the induced exponent action is `m ↦ linearᵀm`
    /// (equal to `dφ`).
    pub linear: IntMatrix,
    /// Basis of the support-difference lattice used by the constraints.
    pub basis_f: Vec<LatticeVector>,
    /// The character values `χ^{f_j}(λ)`, pinned without solving for `λ`.
    pub constraint_values: Vec<GaussianRational>,
    /// `λ` itself, solved exactly when the difference lattice is all of Z^r
    /// (otherwise the entries may require roots and are left implicit).
    pub explicit_lambda: Option<ScalarTuple>,
    /// `φ(0)`, the unit-monomial shift of the image: `ψ*(h) = α·χ^{−v}·h`.
    pub translation_v: LatticeVector,
    /// The witness pair `(α, v)` for the proportionality above; present only
    /// together with `explicit_lambda`.
    pub proportionality: Option<(GaussianRational, LatticeVector)>,
}

/// Build the lift certificate for a group element `phi` of `h`'s symmetry
/// group. Errors with [`GaffError::NotInGroup`] when `phi` fails its own
/// certificate (i.e. it was never a symmetry), and with
/// [`GaffError::SupportNotPreserved`] when it does not even permute the
/// support.
pub fn lift_certificate(
    h: &LaurentPoly,
    phi: &AffineLatticeMap,
) -> Result<AutoCertificate, GaffError> {
    let ctx = SupportContext::new(h)?;
    let sigma = ctx.permutation_of(phi)?;
    let r = h.rank();
    let n = ctx.n();
    let diffs: Vec<LatticeVector> = (1..n)
        .map(|i| ctx.support[i].sub(&ctx.support[0]))
        .collect();
    if diffs.is_empty() {
        return Err(GaffError::NotFullRank);
    }
    let (echelon, _) = hnf(&IntMatrix::from_row_vectors(&diffs));
    let mx: Vec<LatticeVector> = (0..echelon.rows())
        .map(|i| echelon.row(i))
        .filter(|row| !row.is_zero())
        .collect();
    if mx.len() < r {
        return Err(GaffError::NotFullRank);
    }
    let b = IntMatrix::from_row_vectors(&mx);
    let smith = snf(&b);
    // Rows of U·B form a basis of the difference lattice aligned with the
    // invariant factors.
    let aligned = smith.u.mul(&b);
    let basis_f: Vec<LatticeVector> = (0..r).map(|i| aligned.row(i)).collect();

    // Express each basis vector as an integer combination of the raw
    // differences, then transport it through the permutation to pin the
    // character value of the lift.
    let d_cols = IntMatrix::from_col_vectors(&diffs);
    let mut constraint_values = Vec::with_capacity(r);
    for f in &basis_f {
        let a = solve_integer_system(&d_cols, f)
            .expect("difference-lattice basis vector must lie in the difference lattice");
        let mut value = GaussianRational::one();
        for (i, coeff_index) in (1..n).enumerate() {
            if a[i].is_zero() {
                continue;
            }
            let source = &ctx.coeffs[coeff_index] / &ctx.coeffs[0];
            let image = &ctx.coeffs[sigma.apply(coeff_index)] / &ctx.coeffs[sigma.apply(0)];
            value = &value * &source.pow(&-a[i].clone());
            value = &value * &image.pow(&a[i]);
        }
        constraint_values.push(value);
    }

    let linear = phi.linear.transpose();
    let translation_v = phi.translation.clone();

    // Solve for λ exactly when the difference lattice is the whole ambient
    // lattice (all invariant factors 1): then basis_f is unimodular and the
    // character values determine λ coordinate by coordinate.
    let full_index = smith.invariant_factors().iter().all(|d| d.is_one());
    let (explicit_lambda, proportionality) = if full_index {
        let f_mat = IntMatrix::from_row_vectors(&basis_f);
        let g = f_mat.inverse_unimodular();
        let mut lambda = Vec::with_capacity(r);
        for k in 0..r {
            let mut v = GaussianRational::one();
            for (j, c) in constraint_values.iter().enumerate() {
                v = &v * &c.pow(g.get(k, j));
            }
            lambda.push(v);
        }
        let lambda = ScalarTuple::new(lambda);
        let pulled = monomial_substitute(h, &linear, &lambda)?;
        let Some((alpha, w)) = proportional_monomial_factor(&pulled, h)? else {
            return Err(GaffError::NotInGroup);
        };
        (Some(lambda), Some((alpha, w.neg())))
    } else {
        (None, None)
    };

    let cert = AutoCertificate {
        linear,
        basis_f,
        constraint_values,
        explicit_lambda,
        translation_v,
        proportionality,
    };
    if !verify_certificate(h, &cert)? {
        return Err(GaffError::NotInGroup);
    }
    Ok(cert)
}

/// Check a lift certificate against `h` using coefficient ratios only: for all
/// support points `b, c`, writing `b − c = Σ g_j f_j`, the identity
/// `α_{φ(b)}/α_{φ(c)} = (α_b/α_c) · Π_j constraint_j^{g_j}` must hold. When an
/// explicit `λ` is included, its character values and the unit-monomial
/// proportionality of the substituted polynomial are checked as well.
///
/// Returns `Ok(false)` for a well-formed certificate that fails, and an error
/// for one that is structurally unusable.
pub fn verify_certificate(h: &LaurentPoly, cert: &AutoCertificate) -> Result<bool, GaffError> {
    let ctx = SupportContext::new(h)?;
    let r = h.rank();
    if cert.linear.rows() != r || cert.linear.cols() != r {
        return Err(GaffError::CorruptCertificate(format!(
            "linear part is {}x{}, expected {}x{}",
            cert.linear.rows(),
            cert.linear.cols(),
            r,
            r
        )));
    }
    if cert.translation_v.len() != r {
        return Err(GaffError::CorruptCertificate(
            "translation length does not match the rank".to_string(),
        ));
    }
    if cert.basis_f.len() != cert.constraint_values.len() {
        return Err(GaffError::CorruptCertificate(
            "one constraint value per basis vector is required".to_string(),
        ));
    }
    if cert.basis_f.iter().any(|f| f.len() != r) {
        return Err(GaffError::CorruptCertificate(
            "basis vector length does not match the rank".to_string(),
        ));
    }
    if cert.explicit_lambda.is_none() && cert.proportionality.is_some() {
        return Err(GaffError::CorruptCertificate(
            "proportionality witness requires an explicit lambda".to_string(),
        ));
    }
    if cert.constraint_values.iter().any(|c| c.is_zero()) {
        return Ok(false);
    }
    if !cert.linear.is_unimodular() {
        return Ok(false);
    }
    // The exponent action of ψ* is m ↦ linearᵀ·m; the support map adds v.
    let phi = AffineLatticeMap {
        linear: cert.linear.transpose(),
        translation: cert.translation_v.clone(),
    };
    let sigma = match ctx.permutation_of(&phi) {
        Ok(s) => s,
        Err(GaffError::SupportNotPreserved) => return Ok(false),
        Err(e) => return Err(e),
    };
    let solver = SublatticeSolver::new(&cert.basis_f).map_err(|e| match e {
        ZLatticeError::DependentBasis => {
            GaffError::CorruptCertificate("constraint basis is linearly dependent".to_string())
        }
        other => GaffError::Lattice(other),
    })?;
    for b in 0..ctx.n() {
        for c in 0..ctx.n() {
            if b == c {
                continue;
            }
            let w = ctx.support[b].sub(&ctx.support[c]);
            let g = solver
                .solve(&w)?
                .ok_or_else(|| {
                    GaffError::CorruptCertificate(
                        "a support difference lies outside the constraint basis span".to_string(),
                    )
                })?;
            let mut expected = &ctx.coeffs[b] / &ctx.coeffs[c];
            for (j, gj) in g.iter().enumerate() {
                if !gj.is_zero() {
                    expected = &expected * &cert.constraint_values[j].pow(gj);
                }
            }
            let actual = &ctx.coeffs[sigma.apply(b)] / &ctx.coeffs[sigma.apply(c)];
            if actual != expected {
                return Ok(false);
            }
        }
    }
    if let Some(lambda) = &cert.explicit_lambda {
        if lambda.len() != r {
            return Err(GaffError::CorruptCertificate(
                "lambda length does not match the rank".to_string(),
            ));
        }
        for (f, c) in cert.basis_f.iter().zip(&cert.constraint_values) {
            if &lambda.character(f) != c {
                return Ok(false);
            }
        }
        let Some((alpha, v)) = &cert.proportionality else {
            return Err(GaffError::CorruptCertificate(
                "explicit lambda requires a proportionality witness".to_string(),
            ));
        };
        let pulled = monomial_substitute(h, &cert.linear, lambda)?;
        match proportional_monomial_factor(&pulled, h)? {
            Some((a, w)) if &a == alpha && w == v.neg() => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}
