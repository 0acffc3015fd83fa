//! Exact integer linear algebra over the lattice N = Z^d.
//!
//! Everything here is arbitrary precision. Basis choices are pinned down by
//! Hermite normal form so that repeated runs produce identical output.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// A point of N = Z^d, stored as a row vector.
pub type RayVector = Vec<Int>;

/// A point of the dual lattice M = Hom(N, Z).
pub type DualVector = Vec<Int>;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn vec_i64(v: &[i64]) -> RayVector {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Exact pairing m(v) = Σ m_i v_i.
pub fn pair(m: &DualVector, v: &RayVector) -> Int {
    assert_eq!(m.len(), v.len());
    m.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn add_vec(a: &RayVector, b: &RayVector) -> RayVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &RayVector, b: &RayVector) -> RayVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Int, a: &RayVector) -> RayVector {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vec(a: &[Int]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// gcd of all entries; 0 for the zero vector.
pub fn content(a: &[Int]) -> Int {
    a.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive(a: &[Int]) -> bool {
    content(a).is_one()
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_rows(rows: &[RayVector]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row.iter().cloned());
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn at(&self, r: usize, c: usize) -> &Int {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Int {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> RayVector {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> RayVector {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn row_list(&self) -> Vec<RayVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k).clone();
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let add = &a * other.at(k, c);
                    *out.at_mut(r, c) += add;
                }
            }
        }
        out
    }

    /// v · self for a row vector v of length `rows`.
    pub fn apply_left(&self, v: &[Int]) -> RayVector {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| &v[r] * self.at(r, c)).sum())
            .collect()
    }
}

/// Row Hermite normal form. Returns (H, U) with U unimodular, U·A = H,
/// pivots positive, entries above each pivot reduced into [0, pivot),
/// zero rows last. H is the canonical basis of the row space of A.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut pr = 0;
    for col in 0..h.cols {
        if pr >= h.rows {
            break;
        }
        let Some(nz) = (pr..h.rows).find(|&r| !h.at(r, col).is_zero()) else {
            continue;
        };
        h.swap_rows(pr, nz);
        u.swap_rows(pr, nz);
        for r in pr + 1..h.rows {
            while !h.at(r, col).is_zero() {
                let a0 = h.at(pr, col).clone();
                let b0 = h.at(r, col).clone();
                let eg = a0.extended_gcd(&b0);
                let (s, t, g) = (eg.x, eg.y, eg.gcd);
                let p = &a0 / &g;
                let q = &b0 / &g;
                combine_rows(&mut h, pr, r, &s, &t, &q, &p);
                combine_rows(&mut u, pr, r, &s, &t, &q, &p);
            }
        }
        if h.at(pr, col) < &Int::zero() {
            negate_row(&mut h, pr);
            negate_row(&mut u, pr);
        }
        let pivot = h.at(pr, col).clone();
        for r in 0..pr {
            let q = h.at(r, col).div_floor(&pivot);
            if !q.is_zero() {
                sub_multiple_row(&mut h, r, pr, &q);
                sub_multiple_row(&mut u, r, pr, &q);
            }
        }
        pr += 1;
    }
    (h, u)
}

/// rows (i, j) <- (s·row_i + t·row_j, −q·row_i + p·row_j); unimodular since s·p + t·q = 1.
fn combine_rows(m: &mut IntMatrix, i: usize, j: usize, s: &Int, t: &Int, q: &Int, p: &Int) {
    for c in 0..m.cols {
        let a = m.at(i, c).clone();
        let b = m.at(j, c).clone();
        *m.at_mut(i, c) = s * &a + t * &b;
        *m.at_mut(j, c) = p * &b - q * &a;
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for c in 0..m.cols {
        let v = -m.at(r, c).clone();
        *m.at_mut(r, c) = v;
    }
}

fn sub_multiple_row(m: &mut IntMatrix, r: usize, src: usize, q: &Int) {
    for c in 0..m.cols {
        let d = q * m.at(src, c);
        *m.at_mut(r, c) -= d;
    }
}

pub fn rank(a: &IntMatrix) -> usize {
    let (h, _) = hnf(a);
    (0..h.rows).filter(|&r| !is_zero_vec(&h.row(r))).count()
}

/// Canonical Z-basis of the left kernel {v : v·mat = 0}, one basis row per
/// kernel dimension, in Hermite-reduced form. Empty (0 rows) for full row rank.
pub fn kernel_basis(mat: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(mat);
    let mut ker_rows = Vec::new();
    for r in 0..h.rows {
        if is_zero_vec(&h.row(r)) {
            ker_rows.push(u.row(r));
        }
    }
    if ker_rows.is_empty() {
        return IntMatrix::zero(0, mat.rows);
    }
    let (canon, _) = hnf(&IntMatrix::from_rows(&ker_rows));
    canon
}

/// Smith decomposition: returns (U, D, V) with U·A·V = D, U and V unimodular,
/// D diagonal with each diagonal entry dividing the next.
pub fn snf(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let steps = d.rows.min(d.cols);
    let mut t = 0;
    while t < steps {
        let mut pivot: Option<(usize, usize)> = None;
        'scan: for r in t..d.rows {
            for c in t..d.cols {
                if !d.at(r, c).is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pr, pc)) => d.at(r, c).magnitude() < d.at(pr, pc).magnitude(),
                    };
                    if better {
                        pivot = Some((r, c));
                    }
                    if d.at(r, c).magnitude().is_one() {
                        break 'scan;
                    }
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        d.swap_rows(t, pr);
        u.swap_rows(t, pr);
        d.swap_cols(t, pc);
        v.swap_cols(t, pc);
        loop {
            for r in t + 1..d.rows {
                while !d.at(r, t).is_zero() {
                    let a0 = d.at(t, t).clone();
                    let b0 = d.at(r, t).clone();
                    // exact quotient keeps the pivot row fixed, so the
                    // clearing passes cannot reintroduce entries forever
                    if (&b0 % &a0).is_zero() {
                        let q = &b0 / &a0;
                        row_sub_scaled(&mut d, r, t, &q);
                        row_sub_scaled(&mut u, r, t, &q);
                    } else {
                        let eg = a0.extended_gcd(&b0);
                        let p = &a0 / &eg.gcd;
                        let q = &b0 / &eg.gcd;
                        combine_rows(&mut d, t, r, &eg.x, &eg.y, &q, &p);
                        combine_rows(&mut u, t, r, &eg.x, &eg.y, &q, &p);
                    }
                }
            }
            for c in t + 1..d.cols {
                while !d.at(t, c).is_zero() {
                    let a0 = d.at(t, t).clone();
                    let b0 = d.at(t, c).clone();
                    if (&b0 % &a0).is_zero() {
                        let q = &b0 / &a0;
                        col_sub_scaled(&mut d, c, t, &q);
                        col_sub_scaled(&mut v, c, t, &q);
                    } else {
                        let eg = a0.extended_gcd(&b0);
                        let p = &a0 / &eg.gcd;
                        let q = &b0 / &eg.gcd;
                        combine_cols(&mut d, t, c, &eg.x, &eg.y, &q, &p);
                        combine_cols(&mut v, t, c, &eg.x, &eg.y, &q, &p);
                    }
                }
            }
            let row_clean = (t + 1..d.cols).all(|c| d.at(t, c).is_zero());
            let col_clean = (t + 1..d.rows).all(|r| d.at(r, t).is_zero());
            if row_clean && col_clean {
                break;
            }
        }
        if d.at(t, t) < &Int::zero() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        // divisibility chain: entry (t,t) must divide everything below-right
        let dt = d.at(t, t).clone();
        let mut offender = None;
        'find: for r in t + 1..d.rows {
            for c in t + 1..d.cols {
                if !(d.at(r, c) % &dt).is_zero() {
                    offender = Some(r);
                    break 'find;
                }
            }
        }
        if let Some(r) = offender {
            add_row_to(&mut d, t, r);
            add_row_to(&mut u, t, r);
            continue;
        }
        t += 1;
    }
    (u, d, v)
}

/// cols (i, j) <- (s·col_i + t·col_j, −q·col_i + p·col_j).
fn combine_cols(m: &mut IntMatrix, i: usize, j: usize, s: &Int, t: &Int, q: &Int, p: &Int) {
    for r in 0..m.rows {
        let a = m.at(r, i).clone();
        let b = m.at(r, j).clone();
        *m.at_mut(r, i) = s * &a + t * &b;
        *m.at_mut(r, j) = p * &b - q * &a;
    }
}

/// row_dst <- row_dst − q·row_src.
fn row_sub_scaled(m: &mut IntMatrix, dst: usize, src: usize, q: &Int) {
    for c in 0..m.cols {
        let v = m.at(src, c).clone();
        *m.at_mut(dst, c) -= q * v;
    }
}

/// col_dst <- col_dst − q·col_src.
fn col_sub_scaled(m: &mut IntMatrix, dst: usize, src: usize, q: &Int) {
    for r in 0..m.rows {
        let v = m.at(r, src).clone();
        *m.at_mut(r, dst) -= q * v;
    }
}

fn add_row_to(m: &mut IntMatrix, dst: usize, src: usize) {
    for c in 0..m.cols {
        let v = m.at(src, c).clone();
        *m.at_mut(dst, c) += v;
    }
}

/// Determinant of a square matrix, by fraction-free Bareiss elimination.
pub fn det(a: &IntMatrix) -> Int {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    if n == 0 {
        return Int::one();
    }
    let mut m = a.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m.at(k, k).is_zero() {
            let Some(sw) = (k + 1..n).find(|&r| !m.at(r, k).is_zero()) else {
                return Int::zero();
            };
            m.swap_rows(k, sw);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                *m.at_mut(i, j) = &num / &prev;
            }
        }
        for i in k + 1..n {
            *m.at_mut(i, k) = Int::zero();
        }
        prev = m.at(k, k).clone();
    }
    sign * m.at(n - 1, n - 1).clone()
}

/// Solves point = Σ c_i·generators_i exactly over Q. The generators must be
/// linearly independent. Returns the coefficients when the point lies in the
/// nonnegative span (the cone), `None` otherwise. Over a unimodular generator
/// matrix the coefficients are integral.
pub fn solve_in_cone(generators: &[RayVector], point: &RayVector) -> Result<Option<Vec<Rat>>> {
    let k = generators.len();
    if k == 0 {
        return Ok(if is_zero_vec(point) { Some(Vec::new()) } else { None });
    }
    let d = generators[0].len();
    let g = IntMatrix::from_rows(generators);
    if rank(&g) < k {
        return Err(Error::DependentGenerators);
    }
    // Gaussian elimination over Q on the d×k system (columns = generators).
    let mut aug: Vec<Vec<Rat>> = (0..d)
        .map(|r| {
            let mut row: Vec<Rat> = (0..k).map(|c| Rat::from(g.at(c, r).clone())).collect();
            row.push(Rat::from(point[r].clone()));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for pc in 0..k {
        let Some(nz) = (pr..d).find(|&r| !aug[r][pc].is_zero()) else {
            continue;
        };
        aug.swap(pr, nz);
        let inv = aug[pr][pc].recip();
        for c in pc..=k {
            aug[pr][c] = &aug[pr][c] * &inv;
        }
        for r in 0..d {
            if r != pr && !aug[r][pc].is_zero() {
                let f = aug[r][pc].clone();
                for c in pc..=k {
                    let s = &aug[pr][c] * &f;
                    aug[r][c] = &aug[r][c] - &s;
                }
            }
        }
        pivots.push((pr, pc));
        pr += 1;
    }
    // independence gives one pivot per column; leftover rows must be consistent
    for r in pr..d {
        if !aug[r][k].is_zero() {
            return Ok(None);
        }
    }
    let mut coeffs = vec![Rat::zero(); k];
    for &(r, c) in &pivots {
        coeffs[c] = aug[r][k].clone();
    }
    if coeffs.iter().any(|c| c < &Rat::zero()) {
        return Ok(None);
    }
    Ok(Some(coeffs))
}

/// Integer matrix P of shape d×(d−k) such that v ↦ v·P is a surjection
/// N → Z^(d−k) whose kernel is the saturation of span(sublattice_gens).
pub fn quotient_projection(sublattice_gens: &[RayVector]) -> Result<IntMatrix> {
    assert!(!sublattice_gens.is_empty());
    let k = sublattice_gens.len();
    let d = sublattice_gens[0].len();
    let a = IntMatrix::from_rows(sublattice_gens);
    if rank(&a) < k {
        return Err(Error::DependentGenerators);
    }
    let (_, _, v) = snf(&a);
    // in coordinates v ↦ v·V, the saturated span becomes Z^k × 0
    let mut p = IntMatrix::zero(d, d - k);
    for r in 0..d {
        for c in 0..d - k {
            *p.at_mut(r, c) = v.at(r, k + c).clone();
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| vec_i64(r)).collect::<Vec<_>>())
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let k = kernel_basis(&mat(&[&[1, 0], &[0, 1]]));
        assert_eq!(k.rows, 0);
    }

    #[test]
    fn kernel_of_projective_plane_rays() {
        let k = kernel_basis(&mat(&[&[1, 0], &[0, 1], &[-1, -1]]));
        assert_eq!(k.rows, 1);
        assert_eq!(k.row(0), vec_i64(&[1, 1, 1]));
    }

    #[test]
    fn solve_in_cone_basis() {
        let gens = vec![vec_i64(&[1, 0]), vec_i64(&[0, 1])];
        let c = solve_in_cone(&gens, &vec_i64(&[2, 3])).unwrap().unwrap();
        assert_eq!(c, vec![Rat::from(int(2)), Rat::from(int(3))]);
        assert!(solve_in_cone(&gens, &vec_i64(&[1, -1])).unwrap().is_none());
    }

    #[test]
    fn solve_in_cone_single_ray() {
        let gens = vec![vec_i64(&[-1, 0, 0, 0])];
        let c = solve_in_cone(&gens, &vec_i64(&[-2, 0, 0, 0])).unwrap().unwrap();
        assert_eq!(c, vec![Rat::from(int(2))]);
    }

    #[test]
    fn solve_in_cone_rejects_dependent() {
        let gens = vec![vec_i64(&[1, 0]), vec_i64(&[2, 0])];
        assert!(matches!(solve_in_cone(&gens, &vec_i64(&[1, 0])), Err(Error::DependentGenerators)));
    }

    #[test]
    fn quotient_by_axis() {
        let p = quotient_projection(&[vec_i64(&[1, 0])]).unwrap();
        assert_eq!((p.rows, p.cols), (2, 1));
        assert!(is_zero_vec(&p.apply_left(&vec_i64(&[1, 0]))));
        let img = p.apply_left(&vec_i64(&[0, 1]));
        assert!(img[0].magnitude().is_one());
    }

    #[test]
    fn quotient_saturates() {
        let p = quotient_projection(&[vec_i64(&[2, 0, 0])]).unwrap();
        assert_eq!((p.rows, p.cols), (3, 2));
        assert!(is_zero_vec(&p.apply_left(&vec_i64(&[1, 0, 0]))));
        assert_eq!(rank(&p), 2);
    }

    #[test]
    fn snf_diagonalizes() {
        let a = mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let (u, d, v) = snf(&a);
        assert_eq!(u.mul(&a).mul(&v), d);
        assert!(det(&u).magnitude().is_one());
        assert!(det(&v).magnitude().is_one());
        for r in 0..d.rows {
            for c in 0..d.cols {
                if r != c {
                    assert!(d.at(r, c).is_zero());
                }
            }
        }
        let d0 = d.at(0, 0).clone();
        let d1 = d.at(1, 1).clone();
        let d2 = d.at(2, 2).clone();
        assert!((&d1 % &d0).is_zero());
        assert!((&d2 % &d1).is_zero());
    }

    #[test]
    fn det_matches_small_cases() {
        assert_eq!(det(&mat(&[&[3]])), int(3));
        assert_eq!(det(&mat(&[&[1, 2], &[3, 4]])), int(-2));
        assert_eq!(det(&mat(&[&[0, 1], &[1, 0]])), int(-1));
        assert_eq!(det(&mat(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]])), int(30));
    }

    proptest! {
        #[test]
        fn hnf_preserves_row_space(rows in proptest::collection::vec(proptest::collection::vec(-9i64..10, 3), 1..5)) {
            let a = IntMatrix::from_rows(&rows.iter().map(|r| vec_i64(r)).collect::<Vec<_>>());
            let (h, u) = hnf(&a);
            prop_assert_eq!(u.mul(&a), h.clone());
            prop_assert!(det(&u).magnitude().is_one());
            // canonical: running hnf again is a fixed point
            let (h2, _) = hnf(&h);
            prop_assert_eq!(h2, h);
        }

        #[test]
        fn kernel_rows_annihilate(rows in proptest::collection::vec(proptest::collection::vec(-9i64..10, 3), 1..6)) {
            let a = IntMatrix::from_rows(&rows.iter().map(|r| vec_i64(r)).collect::<Vec<_>>());
            let k = kernel_basis(&a);
            prop_assert_eq!(k.rows, a.rows - rank(&a));
            for r in 0..k.rows {
                prop_assert!(is_zero_vec(&a.apply_left(&k.row(r))));
            }
        }

        #[test]
        fn snf_factorization_holds(rows in proptest::collection::vec(proptest::collection::vec(-9i64..10, 3), 1..5)) {
            let a = IntMatrix::from_rows(&rows.iter().map(|r| vec_i64(r)).collect::<Vec<_>>());
            let (u, d, v) = snf(&a);
            prop_assert_eq!(u.mul(&a).mul(&v), d);
            prop_assert!(det(&u).magnitude().is_one());
            prop_assert!(det(&v).magnitude().is_one());
        }
    }
}
