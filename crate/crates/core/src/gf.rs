//! Prime-field scalars and matrices with fully deterministic elimination.
//!
//! Every algorithm downstream (span-program verification, share
//! reconstruction, audits) reduces to rank computations and linear solves
//! over F_q, so this module pins the choices that make results reproducible
//! bit for bit:
//!
//! * Gaussian elimination always picks the first nonzero entry below the
//!   current pivot row (no partial pivoting, fields have no rounding).
//! * `solve_left` returns the canonical solution with every free variable
//!   set to zero.
//! * Base-q digit encodings are big-endian, so ascending encoded values
//!   enumerate digit sequences in lexicographic order.
//!
//! Moduli are primes up to 65521, large enough for every construction here
//! while keeping products inside `u64` with room to spare.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A prime modulus q with 2 <= q <= 65521.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldModulus {
    q: u64,
}

impl FieldModulus {
    /// Largest supported modulus (the largest 16-bit prime).
    pub const MAX: u64 = 65521;

    /// Validates primality by trial division.
    pub fn new(q: u64) -> Result<Self, Error> {
        if q > Self::MAX {
            return Err(Error::ModulusTooLarge { q });
        }
        if q < 2 {
            return Err(Error::NotPrime { q });
        }
        let mut d = 2;
        while d * d <= q {
            if q.is_multiple_of(d) {
                return Err(Error::NotPrime { q });
            }
            d += 1;
        }
        Ok(FieldModulus { q })
    }

    /// The modulus value.
    pub fn value(&self) -> u64 {
        self.q
    }

    /// Checks that a scalar is already reduced.
    pub fn check(&self, value: u64) -> Result<u64, Error> {
        if value < self.q {
            Ok(value)
        } else {
            Err(Error::EntryOutOfRange { value, q: self.q })
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.q - b % self.q) % self.q
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.q - a % self.q) % self.q
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        base %= self.q;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.q), "zero has no inverse");
        self.pow(a, self.q - 2)
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(&self) -> u64 {
        if self.q == 2 {
            return 1;
        }
        let order = self.q - 1;
        let factors = prime_factors(order);
        'candidate: for g in 2..self.q {
            for &p in &factors {
                if self.pow(g, order / p) == 1 {
                    continue 'candidate;
                }
            }
            return g;
        }
        unreachable!("every prime field has a primitive root");
    }
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= v {
        if v.is_multiple_of(d) {
            out.push(d);
            while v.is_multiple_of(d) {
                v /= d;
            }
        }
        d += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// Row-major matrix over F_q. Entries are always reduced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct FieldMatrix {
    modulus: FieldModulus,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

/// Wire form: `{"q": 3, "rows": [[0,1,2], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    q: u64,
    rows: Vec<Vec<u64>>,
}

impl TryFrom<MatrixJson> for FieldMatrix {
    type Error = Error;

    fn try_from(json: MatrixJson) -> Result<Self, Error> {
        let modulus = FieldModulus::new(json.q)?;
        FieldMatrix::from_rows(modulus, &json.rows)
    }
}

impl From<FieldMatrix> for MatrixJson {
    fn from(m: FieldMatrix) -> MatrixJson {
        MatrixJson { q: m.modulus.value(), rows: m.to_rows() }
    }
}

impl FieldMatrix {
    /// Builds a matrix from row slices, validating shape and entry range.
    /// An empty row list yields the 0 x 0 matrix; use [`FieldMatrix::zero`]
    /// for empty matrices with a definite column count.
    pub fn from_rows(modulus: FieldModulus, rows: &[Vec<u64>]) -> Result<Self, Error> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(height * width);
        for row in rows {
            if row.len() != width {
                return Err(Error::RaggedRows);
            }
            for &v in row {
                entries.push(modulus.check(v)?);
            }
        }
        Ok(FieldMatrix { modulus, rows: height, cols: width, entries })
    }

    /// The all-zero matrix of the given shape.
    pub fn zero(modulus: FieldModulus, rows: usize, cols: usize) -> Self {
        FieldMatrix { modulus, rows, cols, entries: vec![0; rows * cols] }
    }

    /// The n x n identity.
    pub fn identity(modulus: FieldModulus, n: usize) -> Self {
        let mut m = Self::zero(modulus, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Uniformly random matrix; entries are drawn row-major, one
    /// `gen_range(0..q)` call per entry, so a seeded generator yields the
    /// same matrix on every platform.
    pub fn random<R: rand::Rng>(modulus: FieldModulus, rows: usize, cols: usize, rng: &mut R) -> Self {
        let entries = (0..rows * cols).map(|_| rng.gen_range(0..modulus.value())).collect();
        FieldMatrix { modulus, rows, cols, entries }
    }

    pub fn modulus(&self) -> FieldModulus {
        self.modulus
    }

    pub fn height(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        assert!(row < self.rows && col < self.cols, "matrix index out of range");
        self.entries[row * self.cols + col]
    }

    /// Writes one entry, keeping the reduction invariant.
    pub fn set(&mut self, row: usize, col: usize, value: u64) -> Result<(), Error> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::IndexOutOfRange {
                context: format!(
                    "entry ({row}, {col}) of a {}x{} matrix",
                    self.rows, self.cols
                ),
            });
        }
        self.entries[row * self.cols + col] = self.modulus.check(value)?;
        Ok(())
    }

    pub fn row(&self, row: usize) -> &[u64] {
        assert!(row < self.rows, "row index out of range");
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    /// Rows as owned vectors, the shape used in JSON artifacts.
    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    fn same_field(&self, other: &FieldMatrix) -> Result<(), Error> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.value(),
                right: other.modulus.value(),
            });
        }
        Ok(())
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = FieldMatrix::zero(self.modulus, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Matrix product self * rhs.
    pub fn mat_mul(&self, rhs: &FieldMatrix) -> Result<FieldMatrix, Error> {
        self.same_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "cannot multiply {}x{} by {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            });
        }
        let q = self.modulus;
        let mut out = FieldMatrix::zero(q, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let cell = &mut out.entries[r * rhs.cols + c];
                    *cell = q.add(*cell, q.mul(a, rhs.get(k, c)));
                }
            }
        }
        Ok(out)
    }

    /// Product with a column vector: self * v.
    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>, Error> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: format!("vector of length {} against {} columns", v.len(), self.cols),
            });
        }
        let q = self.modulus;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| q.add(acc, q.mul(a, b)))
            })
            .collect())
    }

    /// Product with a row vector on the left: v * self.
    pub fn vec_mul(&self, v: &[u64]) -> Result<Vec<u64>, Error> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: format!("vector of length {} against {} rows", v.len(), self.rows),
            });
        }
        let q = self.modulus;
        let mut out = vec![0; self.cols];
        for (r, &coeff) in v.iter().enumerate() {
            if coeff == 0 {
                continue;
            }
            for (c, cell) in out.iter_mut().enumerate() {
                *cell = q.add(*cell, q.mul(coeff, self.get(r, c)));
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation (self | right).
    pub fn hstack(&self, right: &FieldMatrix) -> Result<FieldMatrix, Error> {
        self.same_field(right)?;
        if self.rows != right.rows {
            return Err(Error::DimensionMismatch {
                context: format!("hstack of {} rows with {} rows", self.rows, right.rows),
            });
        }
        let mut out = FieldMatrix::zero(self.modulus, self.rows, self.cols + right.cols);
        for r in 0..self.rows {
            let dst = &mut out.entries[r * (self.cols + right.cols)..];
            dst[..self.cols].copy_from_slice(self.row(r));
            dst[self.cols..self.cols + right.cols].copy_from_slice(right.row(r));
        }
        Ok(out)
    }

    /// Vertical concatenation (self over below).
    pub fn vstack(&self, below: &FieldMatrix) -> Result<FieldMatrix, Error> {
        self.same_field(below)?;
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch {
                context: format!("vstack of {} columns with {} columns", self.cols, below.cols),
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&below.entries);
        Ok(FieldMatrix { modulus: self.modulus, rows: self.rows + below.rows, cols: self.cols, entries })
    }

    /// Row selection, in the order given. Indices are 0-based here; callers
    /// working with 1-based party or row labels convert first.
    pub fn select_rows(&self, rows: &[usize]) -> Result<FieldMatrix, Error> {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            if r >= self.rows {
                return Err(Error::IndexOutOfRange {
                    context: format!("row {} of a {}-row matrix", r, self.rows),
                });
            }
            entries.extend_from_slice(self.row(r));
        }
        Ok(FieldMatrix { modulus: self.modulus, rows: rows.len(), cols: self.cols, entries })
    }

    /// Column-range selection [start, end).
    pub fn select_cols(&self, start: usize, end: usize) -> Result<FieldMatrix, Error> {
        if start > end || end > self.cols {
            return Err(Error::IndexOutOfRange {
                context: format!("columns {}..{} of a {}-column matrix", start, end, self.cols),
            });
        }
        let width = end - start;
        let mut entries = Vec::with_capacity(self.rows * width);
        for r in 0..self.rows {
            entries.extend_from_slice(&self.row(r)[start..end]);
        }
        Ok(FieldMatrix { modulus: self.modulus, rows: self.rows, cols: width, entries })
    }

    /// Reduced row echelon form plus pivot column indices. Pivoting rule:
    /// scan each column top down from the current pivot row and take the
    /// first nonzero entry.
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let q = self.modulus;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if src != pivot_row {
                for c in 0..m.cols {
                    m.entries.swap(src * m.cols + c, pivot_row * m.cols + c);
                }
            }
            let inv = q.inv(m.get(pivot_row, col));
            for c in 0..m.cols {
                let cell = &mut m.entries[pivot_row * m.cols + c];
                *cell = q.mul(*cell, inv);
            }
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let sub = q.mul(factor, m.get(pivot_row, c));
                    let cell = &mut m.entries[r * m.cols + c];
                    *cell = q.sub(*cell, sub);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Solves v * self == target for a row vector v, if one exists.
    /// The returned solution is canonical: in the reduced system every free
    /// variable is set to zero. `None` means target is outside the row span.
    pub fn solve_left(&self, target: &[u64]) -> Result<Option<Vec<u64>>, Error> {
        if target.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: format!("target of length {} against {} columns", target.len(), self.cols),
            });
        }
        for &v in target {
            self.modulus.check(v)?;
        }
        // v * A = t  <=>  A^T v^T = t^T; eliminate on (A^T | t^T).
        let mut aug = self.transpose();
        let rhs = FieldMatrix { modulus: self.modulus, rows: target.len(), cols: 1, entries: target.to_vec() };
        aug = aug.hstack(&rhs)?;
        let (reduced, pivots) = aug.rref();
        if pivots.contains(&self.rows) {
            return Ok(None);
        }
        let mut v = vec![0; self.rows];
        for (prow, &pcol) in pivots.iter().enumerate() {
            v[pcol] = reduced.get(prow, self.rows);
        }
        Ok(Some(v))
    }

    /// True when every standard basis row e_1 .. e_x (length = width) lies
    /// in the row span.
    pub fn rowspan_contains_basis(&self, x: usize) -> Result<bool, Error> {
        if x > self.cols {
            return Err(Error::DimensionMismatch {
                context: format!("basis prefix {} against {} columns", x, self.cols),
            });
        }
        for i in 0..x {
            let mut e = vec![0; self.cols];
            e[i] = 1;
            if self.solve_left(&e)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Vandermonde matrix: row i is (p_i^0, p_i^1, .., p_i^{width-1}) for the
/// given evaluation points. Points must be distinct and nonzero, which
/// forces q > n.
pub fn vandermonde(
    modulus: FieldModulus,
    n: usize,
    width: usize,
    points: &[u64],
) -> Result<FieldMatrix, Error> {
    if points.len() != n {
        return Err(Error::DimensionMismatch {
            context: format!("{} evaluation points for {} rows", points.len(), n),
        });
    }
    if width > n {
        return Err(Error::DimensionMismatch {
            context: format!("width {} exceeds row count {}", width, n),
        });
    }
    if modulus.value() <= n as u64 {
        return Err(Error::FieldTooSmall { q: modulus.value(), n });
    }
    let mut seen = std::collections::BTreeSet::new();
    for &p in points {
        modulus.check(p)?;
        if p == 0 {
            return Err(Error::ZeroPoint);
        }
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint { point: p });
        }
    }
    let mut rows = Vec::with_capacity(n);
    for &p in points {
        let mut row = Vec::with_capacity(width);
        let mut acc = 1;
        for _ in 0..width {
            row.push(acc);
            acc = modulus.mul(acc, p);
        }
        rows.push(row);
    }
    FieldMatrix::from_rows(modulus, &rows)
}

/// Encodes base-q digits big-endian: the first digit is most significant,
/// so ascending encoded values enumerate digit sequences lexicographically.
pub fn encode_base_q(q: u64, digits: &[u64]) -> Result<u64, Error> {
    let mut acc: u64 = 0;
    for &d in digits {
        debug_assert!(d < q);
        acc = acc
            .checked_mul(q)
            .and_then(|a| a.checked_add(d))
            .ok_or_else(|| Error::SymbolOverflow {
                context: format!("{} digits base {}", digits.len(), q),
            })?;
    }
    Ok(acc)
}

/// Inverse of [`encode_base_q`] for a known digit count.
pub fn decode_base_q(q: u64, len: usize, mut value: u64) -> Vec<u64> {
    let mut digits = vec![0; len];
    for slot in digits.iter_mut().rev() {
        *slot = value % q;
        value /= q;
    }
    debug_assert_eq!(value, 0, "value exceeds the digit capacity");
    digits
}

/// q^len if it fits in u64, used for enumeration-domain sizing.
pub fn checked_domain_size(q: u64, len: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..len {
        acc = acc.checked_mul(q)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldModulus {
        FieldModulus::new(q).unwrap()
    }

    fn m(q: u64, rows: &[&[u64]]) -> FieldMatrix {
        let rows: Vec<Vec<u64>> = rows.iter().map(|r| r.to_vec()).collect();
        FieldMatrix::from_rows(f(q), &rows).unwrap()
    }

    /// Independent multiplication oracle: plain triple loop with i128
    /// accumulation, reduced once at the end.
    fn mat_mul_oracle(a: &FieldMatrix, b: &FieldMatrix) -> Vec<Vec<u64>> {
        let q = a.modulus().value() as i128;
        (0..a.height())
            .map(|r| {
                (0..b.width())
                    .map(|c| {
                        let mut acc: i128 = 0;
                        for k in 0..a.width() {
                            acc += a.get(r, k) as i128 * b.get(k, c) as i128;
                        }
                        (acc % q) as u64
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn modulus_accepts_primes_only() {
        assert!(FieldModulus::new(2).is_ok());
        assert!(FieldModulus::new(3).is_ok());
        assert!(FieldModulus::new(65521).is_ok());
        assert_eq!(FieldModulus::new(1), Err(Error::NotPrime { q: 1 }));
        assert_eq!(FieldModulus::new(0), Err(Error::NotPrime { q: 0 }));
        assert_eq!(FieldModulus::new(4), Err(Error::NotPrime { q: 4 }));
        assert_eq!(FieldModulus::new(65522), Err(Error::ModulusTooLarge { q: 65522 }));
        assert_eq!(FieldModulus::new(65537), Err(Error::ModulusTooLarge { q: 65537 }));
    }

    #[test]
    fn field_arithmetic_inverses() {
        for q in [2, 3, 5, 7, 13] {
            let modulus = f(q);
            for a in 1..q {
                assert_eq!(modulus.mul(a, modulus.inv(a)), 1, "inverse of {a} mod {q}");
                assert_eq!(modulus.add(a, modulus.neg(a)), 0);
            }
        }
    }

    #[test]
    fn primitive_roots_are_smallest_generators() {
        assert_eq!(f(2).primitive_root(), 1);
        assert_eq!(f(3).primitive_root(), 2);
        assert_eq!(f(5).primitive_root(), 2);
        assert_eq!(f(7).primitive_root(), 3);
        assert_eq!(f(13).primitive_root(), 2);
        // Order check: powers 1..q-1 of the root hit every nonzero element.
        for q in [3u64, 5, 7, 11, 13] {
            let modulus = f(q);
            let g = modulus.primitive_root();
            let powers: std::collections::BTreeSet<u64> =
                (1..q).map(|e| modulus.pow(g, e)).collect();
            assert_eq!(powers.len() as u64, q - 1);
        }
    }

    #[test]
    fn from_rows_validates() {
        assert_eq!(
            FieldMatrix::from_rows(f(3), &[vec![0, 1], vec![2]]),
            Err(Error::RaggedRows)
        );
        assert_eq!(
            FieldMatrix::from_rows(f(3), &[vec![0, 3]]),
            Err(Error::EntryOutOfRange { value: 3, q: 3 })
        );
    }

    #[test]
    fn mul_vec_matches_hand_computation() {
        // Masking-matrix times seed from the three-party sample scheme.
        let h = m(3, &[&[1, 2], &[1, 1], &[1, 1], &[1, 0]]);
        assert_eq!(h.mul_vec(&[1, 2]).unwrap(), vec![2, 0, 0, 1]);
    }

    #[test]
    fn mat_mul_matches_oracle() {
        let a = m(7, &[&[1, 2, 3], &[4, 5, 6]]);
        let b = m(7, &[&[6, 1], &[0, 2], &[3, 3]]);
        let prod = a.mat_mul(&b).unwrap();
        assert_eq!(prod.to_rows(), mat_mul_oracle(&a, &b));

        let too_wide = m(7, &[&[1, 1]]);
        assert!(matches!(a.mat_mul(&too_wide), Err(Error::DimensionMismatch { .. })));
        let wrong_field = m(5, &[&[1], &[1], &[1]]);
        assert!(matches!(a.mat_mul(&wrong_field), Err(Error::ModulusMismatch { .. })));
    }

    #[test]
    fn rank_of_sample_program_matrix() {
        let g = m(3, &[&[0, 1, 2], &[1, 1, 1], &[0, 1, 1], &[1, 1, 0]]);
        assert_eq!(g.rank(), 3);
    }

    #[test]
    fn rank_is_transpose_invariant_exhaustively_f2() {
        let q = f(2);
        for code in 0..512u64 {
            let bits: Vec<u64> = (0..9).map(|i| code >> i & 1).collect();
            let rows: Vec<Vec<u64>> = bits.chunks(3).map(|c| c.to_vec()).collect();
            let a = FieldMatrix::from_rows(q, &rows).unwrap();
            assert_eq!(a.rank(), a.transpose().rank(), "matrix code {code}");
        }
    }

    #[test]
    fn solve_left_returns_canonical_solution() {
        let a = m(3, &[&[1, 1, 1], &[0, 1, 1], &[1, 1, 0]]);
        let v = a.solve_left(&[1, 0, 0]).unwrap().unwrap();
        assert_eq!(v, vec![1, 2, 0]);
        assert_eq!(a.vec_mul(&v).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn solve_left_no_solution_raises_rank() {
        // Row span is {(a, a, b)}; the target breaks the first-two-equal shape.
        let a = m(3, &[&[1, 1, 0], &[0, 0, 1]]);
        let target = vec![1, 2, 0];
        assert_eq!(a.solve_left(&target).unwrap(), None);
        let stacked = a
            .vstack(&FieldMatrix::from_rows(f(3), &[target]).unwrap())
            .unwrap();
        assert_eq!(stacked.rank(), a.rank() + 1);
    }

    #[test]
    fn solve_left_handles_empty_row_set() {
        let empty = FieldMatrix::zero(f(3), 0, 3);
        assert_eq!(empty.solve_left(&[0, 0, 0]).unwrap(), Some(vec![]));
        assert_eq!(empty.solve_left(&[1, 0, 0]).unwrap(), None);
    }

    #[test]
    fn rowspan_basis_membership() {
        let g = m(3, &[&[0, 1, 2], &[1, 1, 1], &[0, 1, 1], &[1, 1, 0]]);
        let authorized = g.select_rows(&[1, 2, 3]).unwrap();
        assert!(authorized.rowspan_contains_basis(1).unwrap());
        let forbidden = g.select_rows(&[0, 1]).unwrap();
        assert!(!forbidden.rowspan_contains_basis(1).unwrap());
    }

    #[test]
    fn vandermonde_sample_and_errors() {
        let v = vandermonde(f(5), 3, 2, &[2, 4, 3]).unwrap();
        assert_eq!(v.to_rows(), vec![vec![1, 2], vec![1, 4], vec![1, 3]]);

        assert_eq!(vandermonde(f(5), 3, 2, &[2, 2, 3]), Err(Error::DuplicatePoint { point: 2 }));
        assert_eq!(vandermonde(f(5), 3, 2, &[2, 0, 3]), Err(Error::ZeroPoint));
        assert_eq!(vandermonde(f(3), 3, 2, &[1, 2, 1]), Err(Error::FieldTooSmall { q: 3, n: 3 }));
        assert!(matches!(vandermonde(f(7), 3, 4, &[1, 2, 3]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn vandermonde_submatrices_are_invertible() {
        // Distinct points make every width-subset of rows full rank.
        let v = vandermonde(f(7), 5, 3, &[1, 2, 3, 4, 5]).unwrap();
        for mask in crate::subsets::k_subset_masks(5, 3) {
            let rows = crate::subsets::mask_indices(mask);
            assert_eq!(v.select_rows(&rows).unwrap().rank(), 3);
        }
    }

    #[test]
    fn base_q_codes_round_trip_and_order() {
        for value in 0..27 {
            let digits = decode_base_q(3, 3, value);
            assert_eq!(encode_base_q(3, &digits).unwrap(), value);
        }
        // Big-endian: digit sequences in lexicographic order as values ascend.
        assert_eq!(decode_base_q(3, 3, 0), vec![0, 0, 0]);
        assert_eq!(decode_base_q(3, 3, 1), vec![0, 0, 1]);
        assert_eq!(decode_base_q(3, 3, 9), vec![1, 0, 0]);
        assert!(encode_base_q(65521, &[65520; 20]).is_err());
        assert_eq!(checked_domain_size(3, 4), Some(81));
        assert_eq!(checked_domain_size(65521, 20), None);
    }

    #[test]
    fn matrix_json_round_trip() {
        let g = m(3, &[&[0, 1, 2], &[1, 1, 1]]);
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"q":3,"rows":[[0,1,2],[1,1,1]]}"#);
        let back: FieldMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        let bad: Result<FieldMatrix, _> = serde_json::from_str(r#"{"q":4,"rows":[[0]]}"#);
        assert!(bad.is_err());
        let out_of_range: Result<FieldMatrix, _> = serde_json::from_str(r#"{"q":3,"rows":[[7]]}"#);
        assert!(out_of_range.is_err());
    }
}
