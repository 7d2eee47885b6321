//! Shared helpers for the integration tests: an independent brute-force
//! oracle for the support-symmetry group, random instance generators, and a
//! minor-gcd oracle for invariant factors. Everything here deliberately
//! avoids the library's own search and normal-form code paths.

// Each integration-test target compiles its own copy of this module and uses
// a different subset of it.
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)] // dense elimination oracles: index form is clearest

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use toral_aut::laurent::{LatticeVector, LaurentPoly};
use toral_aut::zlattice::IntMatrix;
use toral_aut::GaussianRational;

/// All permutations of `{0,…,n−1}` by Heap's algorithm.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut out = vec![a.clone()];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Determinant by recursive cofactor expansion (independent of the library's
/// fraction-free elimination).
pub fn cofactor_det(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    assert_eq!(n, a.cols());
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return a.get(0, 0).clone();
    }
    let mut det = BigInt::zero();
    for j in 0..n {
        if a.get(0, j).is_zero() {
            continue;
        }
        let mut rows = Vec::with_capacity(n - 1);
        for i in 1..n {
            let mut row = Vec::with_capacity(n - 1);
            for k in 0..n {
                if k != j {
                    row.push(a.get(i, k).clone());
                }
            }
            rows.push(row);
        }
        let minor = cofactor_det(&IntMatrix::from_rows(rows));
        let signed = if j % 2 == 0 { minor } else { -minor };
        det += a.get(0, j) * signed;
    }
    det
}

/// The unique affine extension of a support permutation, found by dense
/// Gauss–Jordan elimination over the rationals (no incremental state, no
/// pruning): returns the linear part and translation when the extension
/// exists, is integral, and is unimodular.
pub fn oracle_affine_extension(
    support: &[LatticeVector],
    perm: &[usize],
) -> Option<(IntMatrix, LatticeVector)> {
    let n = support.len();
    let r = support[0].len();
    let base = &support[0];
    let target = &support[perm[0]];
    // Rows [dᵀ | eᵀ] of the constraint system D·Lᵀ = E.
    let mut m: Vec<Vec<BigRational>> = Vec::with_capacity(n - 1);
    for i in 1..n {
        let d = support[i].sub(base);
        let e = support[perm[i]].sub(target);
        m.push(
            d.coords()
                .iter()
                .chain(e.coords().iter())
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        );
    }
    let mut pivot_row = 0;
    for col in 0..r {
        let Some(hit) = (pivot_row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            return None; // rank-deficient differences: no unique extension
        };
        m.swap(pivot_row, hit);
        let p = m[pivot_row][col].clone();
        for v in &mut m[pivot_row] {
            *v = &*v / &p;
        }
        for i in 0..m.len() {
            if i == pivot_row || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in 0..2 * r {
                let delta = &f * &m[pivot_row][j];
                m[i][j] = &m[i][j] - &delta;
            }
        }
        pivot_row += 1;
    }
    for row in m.iter().skip(pivot_row) {
        if row[r..].iter().any(|x| !x.is_zero()) {
            return None; // inconsistent image assignment
        }
    }
    // The top r rows are [I | Lᵀ].
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
    if cofactor_det(&linear).abs() != BigInt::one() {
        return None;
    }
    let translation = target.sub(&linear.mul_vec(base));
    for (i, point) in support.iter().enumerate() {
        if linear.mul_vec(point).add(&translation) != support[perm[i]] {
            return None;
        }
    }
    Some((linear, translation))
}

/// All integer relation vectors `a ∈ [−bound, bound]^n` with `Σ a_i = 0` and
/// `Σ a_i·m_i = 0`, found by exhaustive odometer search.
pub fn oracle_relations(support: &[LatticeVector], bound: i64) -> Vec<Vec<BigInt>> {
    let n = support.len();
    let r = support[0].len();
    let mut a = vec![-bound; n];
    let mut out = Vec::new();
    loop {
        let sum: i64 = a.iter().sum();
        if sum == 0 && a.iter().any(|&x| x != 0) {
            let mut combo = vec![BigInt::zero(); r];
            for (i, &ai) in a.iter().enumerate() {
                for k in 0..r {
                    combo[k] += support[i].get(k) * BigInt::from(ai);
                }
            }
            if combo.iter().all(|c| c.is_zero()) {
                out.push(a.iter().map(|&x| BigInt::from(x)).collect());
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if a[k] < bound {
                a[k] += 1;
                break;
            }
            a[k] = -bound;
            k += 1;
        }
    }
}

/// Direct multiplicative check of one relation for one permutation:
/// `Π α_i^{a_i} = Π α_{σ(i)}^{a_i}`.
pub fn oracle_relation_holds(
    coeffs: &[GaussianRational],
    perm: &[usize],
    relation: &[BigInt],
) -> bool {
    let mut lhs = GaussianRational::one();
    let mut rhs = GaussianRational::one();
    for (i, a) in relation.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        lhs = &lhs * &coeffs[i].pow(a);
        rhs = &rhs * &coeffs[perm[i]].pow(a);
    }
    lhs == rhs
}

/// Brute-force order of the support-symmetry group: try all `n!` support
/// permutations, solve each affine extension densely, and check the
/// coefficient condition directly on every box relation.
pub fn brute_force_gaff_order(h: &LaurentPoly) -> usize {
    let support = h.support();
    let coeffs: Vec<GaussianRational> = support
        .iter()
        .map(|m| h.coeff(m).unwrap().clone())
        .collect();
    let relations = oracle_relations(&support, 3);
    all_permutations(support.len())
        .iter()
        .filter(|perm| {
            oracle_affine_extension(&support, perm).is_some()
                && relations
                    .iter()
                    .all(|a| oracle_relation_holds(&coeffs, perm, a))
        })
        .count()
}

/// A random nonzero Gaussian rational with numerators and denominators
/// bounded by 5 in absolute value.
pub fn random_gaussian(rng: &mut StdRng) -> GaussianRational {
    loop {
        let g = GaussianRational::from_parts(
            rng.gen_range(-5i64..=5),
            rng.gen_range(1i64..=5),
            rng.gen_range(-5i64..=5),
            rng.gen_range(1i64..=5),
        );
        if !g.is_zero() {
            return g;
        }
    }
}

/// A random enumeration instance: at most 5 support points of rank 1 or 2
/// with full-rank differences, small coordinates, and random nonzero
/// coefficients. The relation lattice is guaranteed to be generated by
/// vectors within the oracle's search box, so the oracle's membership test is
/// exact for these instances.
pub fn random_support_instance(rng: &mut StdRng) -> LaurentPoly {
    loop {
        let rank = rng.gen_range(1usize..=2);
        let n = rng.gen_range(rank + 1..=5);
        let mut points: Vec<LatticeVector> = Vec::new();
        while points.len() < n {
            let coords: Vec<i64> = (0..rank).map(|_| rng.gen_range(-3i64..=3)).collect();
            let v = LatticeVector::from_i64(&coords);
            if !points.contains(&v) {
                points.push(v);
            }
        }
        // Differences must span over Q: rank via the library HNF would do,
        // but keep the generator independent and test a dense rational rank.
        if rational_rank(&points) < rank {
            continue;
        }
        // The oracle checks relations inside [−3,3]^n; accept the instance
        // only when a full relation basis fits in that box.
        if !relation_basis_fits_box(&points, 3) {
            continue;
        }
        let terms: Vec<(LatticeVector, GaussianRational)> = points
            .into_iter()
            .map(|m| (m, random_gaussian(rng)))
            .collect();
        return LaurentPoly::from_terms(rank, terms);
    }
}

fn rational_rank(points: &[LatticeVector]) -> usize {
    let r = points[0].len();
    let mut rows: Vec<Vec<BigRational>> = points[1..]
        .iter()
        .map(|p| {
            p.sub(&points[0])
                .coords()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..r {
        let Some(hit) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, hit);
        for i in rank + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let f = &rows[i][col] / &rows[rank][col];
            for j in 0..r {
                let delta = &f * &rows[rank][j];
                rows[i][j] = &rows[i][j] - &delta;
            }
        }
        rank += 1;
    }
    rank
}

/// True when the relation lattice of the points is generated by vectors with
/// entries bounded by `bound` (checked via the library kernel, which the
/// normal-form acceptance criterion validates independently).
fn relation_basis_fits_box(points: &[LatticeVector], bound: i64) -> bool {
    let r = points[0].len();
    let mut rows: Vec<Vec<BigInt>> = (0..r)
        .map(|c| points.iter().map(|m| m.get(c).clone()).collect())
        .collect();
    rows.push(vec![BigInt::one(); points.len()]);
    let basis = toral_aut::zlattice::kernel_basis(&IntMatrix::from_rows(rows));
    let b = BigInt::from(bound);
    basis
        .iter()
        .all(|v| v.coords().iter().all(|c| c.abs() <= b))
}

/// A random unimodular matrix: a short product of elementary row operations
/// applied to the identity, keeping entries small.
pub fn random_unimodular(rng: &mut StdRng, size: usize) -> IntMatrix {
    let mut rows: Vec<Vec<BigInt>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    if size < 2 {
        if size == 1 && rng.gen_bool(0.5) {
            rows[0][0] = -BigInt::one();
        }
        return IntMatrix::from_rows(rows);
    }
    for _ in 0..10 {
        match rng.gen_range(0u8..3) {
            0 => {
                let i = rng.gen_range(0..size);
                let mut j = rng.gen_range(0..size);
                while j == i {
                    j = rng.gen_range(0..size);
                }
                let f = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
                for k in 0..size {
                    let add = &f * &rows[j][k];
                    rows[i][k] += add;
                }
            }
            1 => {
                let i = rng.gen_range(0..size);
                let mut j = rng.gen_range(0..size);
                while j == i {
                    j = rng.gen_range(0..size);
                }
                rows.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..size);
                for v in &mut rows[i] {
                    *v = -v.clone();
                }
            }
        }
    }
    IntMatrix::from_rows(rows)
}

/// A random integer matrix with entries in `[−bound, bound]`.
pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<BigInt>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                .collect()
        })
        .collect();
    IntMatrix::from_rows(data)
}

fn combinations(pool: usize, pick: usize) -> Vec<Vec<usize>> {
    if pick == 0 {
        return vec![vec![]];
    }
    if pick > pool {
        return vec![];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..pick).collect();
    loop {
        out.push(idx.clone());
        // Advance the last index that can still move right.
        let mut k = pick;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] + (pick - k) < pool {
                idx[k] += 1;
                for j in k + 1..pick {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Row Hermite shape: zero rows at the bottom, pivots moving strictly right,
/// positive pivots, and entries above each pivot reduced into `[0, pivot)`.
pub fn assert_hermite_shape(h: &IntMatrix) {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero_row = false;
    for i in 0..h.rows() {
        let row = h.row(i);
        let pivot = (0..h.cols()).find(|&j| !row.get(j).is_zero());
        match pivot {
            None => seen_zero_row = true,
            Some(p) => {
                assert!(!seen_zero_row, "nonzero row below a zero row");
                if let Some(lp) = last_pivot {
                    assert!(p > lp, "pivots must move strictly right");
                }
                assert!(row.get(p) > &BigInt::zero(), "pivot must be positive");
                for above in 0..i {
                    let entry = h.get(above, p);
                    assert!(
                        entry >= &BigInt::zero() && entry < row.get(p),
                        "entry above pivot must be reduced"
                    );
                }
                last_pivot = Some(p);
            }
        }
    }
}

/// Smith shape: diagonal, nonnegative, each nonzero entry dividing the next,
/// and no nonzero entry after a zero one.
pub fn assert_smith_shape(s: &IntMatrix) {
    for i in 0..s.rows() {
        for j in 0..s.cols() {
            if i != j {
                assert!(s.get(i, j).is_zero(), "off-diagonal entry in Smith form");
            }
        }
    }
    let k = s.rows().min(s.cols());
    for t in 0..k {
        assert!(s.get(t, t) >= &BigInt::zero(), "negative invariant factor");
        if t + 1 < k {
            let a = s.get(t, t);
            let b = s.get(t + 1, t + 1);
            if a.is_zero() {
                assert!(b.is_zero(), "zero factor followed by a nonzero one");
            } else {
                assert!((b % a).is_zero(), "divisibility chain broken");
            }
        }
    }
}

/// Nonzero invariant factors via the minor-gcd characterization: the k-th
/// determinantal divisor `d_k` is the gcd of all k×k minors, and the k-th
/// invariant factor is `d_k / d_{k−1}`.
pub fn minor_gcd_invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let mut factors = Vec::new();
    let mut previous = BigInt::one();
    for k in 1..=a.rows().min(a.cols()) {
        let mut d = BigInt::zero();
        for row_set in combinations(a.rows(), k) {
            for col_set in combinations(a.cols(), k) {
                let rows: Vec<Vec<BigInt>> = row_set
                    .iter()
                    .map(|&i| col_set.iter().map(|&j| a.get(i, j).clone()).collect())
                    .collect();
                let minor = cofactor_det(&IntMatrix::from_rows(rows));
                d = num_integer::gcd(d, minor);
            }
        }
        if d.is_zero() {
            break;
        }
        factors.push(&d / &previous);
        previous = d;
    }
    factors
}
