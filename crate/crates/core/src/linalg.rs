//! Exact linear algebra over `Z` (arbitrary precision) and over `Z/2^k`.
//!
//! `Z/2^k` is a chain ring: every element is `2^v · unit`, so elimination with
//! a least-valuation pivot never needs division by a non-unit. Arithmetic is
//! done with wrapping `u64` operations followed by a mask, which is exact for
//! `k <= 63`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Largest supported exponent for `Z/2^k` arithmetic.
pub const MAX_EXP: u32 = 48;

#[inline]
pub fn mask(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Reduces a signed integer into `[0, 2^k)`.
#[inline]
pub fn reduce(x: i64, k: u32) -> u64 {
    (x as u64) & mask(k)
}

/// 2-adic valuation of `x` in `Z/2^k`; `k` for zero.
#[inline]
pub fn valuation(x: u64, k: u32) -> u32 {
    if x & mask(k) == 0 {
        k
    } else {
        x.trailing_zeros()
    }
}

/// Inverse of an odd number modulo `2^64` (and hence modulo every `2^k`).
#[inline]
pub fn odd_inverse(u: u64) -> u64 {
    debug_assert!(u & 1 == 1);
    let mut inv = u;
    for _ in 0..6 {
        inv = inv.wrapping_mul(2u64.wrapping_sub(u.wrapping_mul(inv)));
    }
    inv
}

/// Dense row-major matrix over `Z/2^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    pub rows: usize,
    pub cols: usize,
    pub exp: u32,
    pub data: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize, exp: u32) -> Self {
        assert!((1..=MAX_EXP).contains(&exp), "modulus exponent {exp} out of range");
        ModMatrix { rows, cols, exp, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, exp: u32) -> Self {
        let mut m = Self::zeros(n, n, exp);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, exp: u32, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let mut m = Self::zeros(rows, cols, exp);
        for (d, &e) in m.data.iter_mut().zip(entries) {
            *d = reduce(e, exp);
        }
        m
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(rows: usize, exp: u32, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len(), exp);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &v) in c.iter().enumerate() {
                m.data[i * m.cols + j] = v & mask(exp);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v & mask(self.exp);
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: i64) {
        let idx = i * self.cols + j;
        self.data[idx] = self.data[idx].wrapping_add(v as u64) & mask(self.exp);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> ModMatrix {
        let mut t = ModMatrix::zeros(self.cols, self.rows, self.exp);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        let m = mask(self.exp);
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(x).fold(0u64, |acc, (&a, &b)| acc.wrapping_add(a.wrapping_mul(b))) & m
            })
            .collect()
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ModMatrix::zeros(self.rows, other.cols, self.exp.min(other.exp));
        let m = mask(out.exp);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                let orow = &other.data[l * other.cols..(l + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = d.wrapping_add(a.wrapping_mul(b));
                }
            }
            for d in &mut out.data[i * other.cols..(i + 1) * other.cols] {
                *d &= m;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Reinterprets the entries modulo `2^exp` for a smaller `exp`.
    pub fn reduced(&self, exp: u32) -> ModMatrix {
        assert!(exp <= self.exp);
        let m = mask(exp);
        ModMatrix { rows: self.rows, cols: self.cols, exp, data: self.data.iter().map(|&x| x & m).collect() }
    }
}

/// `row_dst -= f * row_src` on slices, modulo `2^k` (mask applied).
#[inline]
fn axpy(dst: &mut [u64], src: &[u64], f: u64, m: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = d.wrapping_sub(f.wrapping_mul(s)) & m;
    }
}

/// Result of Smith reduction over `Z/2^k`: `A · V` has its `i`-th column equal
/// to `2^{e_i}` times a column of an invertible matrix.
#[derive(Debug, Clone)]
pub struct ModSmith {
    pub exp: u32,
    /// Valuations of the diagonal entries; `exp` marks a zero entry.
    pub diagonal: Vec<u32>,
    /// Column transform (cols × cols), invertible modulo `2^exp`.
    pub v: ModMatrix,
    /// Row transform, only when requested.
    pub u: Option<ModMatrix>,
}

impl ModSmith {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|&&e| e < self.exp).count()
    }
}

/// Smith normal form over `Z/2^k` with the least-valuation pivot rule
/// (ties broken by lowest row, then lowest column). Always tracks the column
/// transform `V`; tracks `U` when `with_u` is set, so that `U·A·V = D`.
pub fn smith_mod(a: &ModMatrix, with_u: bool) -> ModSmith {
    let k = a.exp;
    let msk = mask(k);
    let (rows, cols) = (a.rows, a.cols);
    let mut m = a.data.clone();
    let mut v = ModMatrix::identity(cols, k);
    let mut u = if with_u { Some(ModMatrix::identity(rows, k)) } else { None };
    let steps = rows.min(cols);
    let mut diagonal = Vec::with_capacity(steps);
    for t in 0..steps {
        // pivot search
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in t..rows {
            let row = &m[i * cols..(i + 1) * cols];
            for j in t..cols {
                let x = row[j];
                if x != 0 {
                    let val = x.trailing_zeros();
                    if best.is_none_or(|(bv, _, _)| val < bv) {
                        best = Some((val, i, j));
                        if val == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((val, pi, pj)) = best else {
            diagonal.extend(std::iter::repeat_n(k, steps - t));
            break;
        };
        if pi != t {
            for j in 0..cols {
                m.swap(pi * cols + j, t * cols + j);
            }
            if let Some(u) = u.as_mut() {
                for j in 0..rows {
                    u.data.swap(pi * rows + j, t * rows + j);
                }
            }
        }
        if pj != t {
            for i in 0..rows {
                m.swap(i * cols + pj, i * cols + t);
            }
            for i in 0..cols {
                v.data.swap(i * cols + pj, i * cols + t);
            }
        }
        // normalize pivot to 2^val
        let unit = m[t * cols + t] >> val;
        let uinv = odd_inverse(unit);
        for x in &mut m[t * cols..(t + 1) * cols] {
            *x = x.wrapping_mul(uinv) & msk;
        }
        if let Some(u) = u.as_mut() {
            for x in &mut u.data[t * rows..(t + 1) * rows] {
                *x = x.wrapping_mul(uinv) & msk;
            }
        }
        // clear the pivot column below
        let (head, tail) = m.split_at_mut((t + 1) * cols);
        let prow = &head[t * cols..(t + 1) * cols];
        for (off, row) in tail.chunks_mut(cols).enumerate() {
            let x = row[t];
            if x != 0 {
                let f = x >> val;
                axpy(&mut row[t..], &prow[t..], f, msk);
                if let Some(u) = u.as_mut() {
                    let i = t + 1 + off;
                    let (uh, ut) = u.data.split_at_mut(i * rows);
                    let src = &uh[t * rows..(t + 1) * rows];
                    axpy(&mut ut[..rows], src, f, msk);
                }
            }
        }
        // clear the pivot row to the right (only row t and V change)
        for j in t + 1..cols {
            let x = m[t * cols + j];
            if x != 0 {
                let f = x >> val;
                m[t * cols + j] = 0;
                for i in 0..cols {
                    let src = v.data[i * cols + t];
                    let d = &mut v.data[i * cols + j];
                    *d = d.wrapping_sub(f.wrapping_mul(src)) & msk;
                }
            }
        }
        diagonal.push(val);
    }
    ModSmith { exp: k, diagonal, v, u }
}

/// Checks the column-side identity of a Smith reduction without `U`: column
/// `i` of `A·V` must be divisible by `2^{e_i}`, and vanish for zero entries
/// and beyond the diagonal.
pub fn verify_smith_columns(a: &ModMatrix, s: &ModSmith) -> bool {
    let av = a.mul(&s.v);
    for j in 0..av.cols {
        let e = s.diagonal.get(j).copied().unwrap_or(s.exp);
        for i in 0..av.rows {
            if valuation(av.get(i, j), s.exp) < e {
                return false;
            }
        }
    }
    true
}

/// Verifies `U·A·V = D` when `U` was tracked.
pub fn verify_smith_full(a: &ModMatrix, s: &ModSmith) -> bool {
    let Some(u) = &s.u else { return false };
    let d = u.mul(a).mul(&s.v);
    for i in 0..d.rows {
        for j in 0..d.cols {
            let expect = if i == j && s.diagonal[i] < s.exp { 1u64 << s.diagonal[i] } else { 0 };
            if d.get(i, j) != expect {
                return false;
            }
        }
    }
    true
}

/// Row-echelon form over `Z/2^k` with the Howell property: a vector of the
/// row span whose first `c` entries vanish is a combination of the rows with
/// pivot column `>= c`. Pivots are powers of two; entries above a pivot are
/// reduced below it.
#[derive(Debug, Clone)]
pub struct HowellForm {
    pub exp: u32,
    pub cols: usize,
    /// Rows as (pivot column, pivot valuation, entries).
    pub rows: Vec<(usize, u32, Vec<u64>)>,
}

impl HowellForm {
    pub fn new(input: Vec<Vec<u64>>, cols: usize, exp: u32) -> HowellForm {
        let msk = mask(exp);
        let mut pending: Vec<Vec<u64>> = input
            .into_iter()
            .map(|mut r| {
                assert_eq!(r.len(), cols);
                for x in &mut r {
                    *x &= msk;
                }
                r
            })
            .filter(|r| r.iter().any(|&x| x != 0))
            .collect();
        let mut out: Vec<(usize, u32, Vec<u64>)> = Vec::new();
        let mut col = 0;
        while col < cols && !pending.is_empty() {
            let mut best: Option<(u32, usize)> = None;
            for (idx, r) in pending.iter().enumerate() {
                let x = r[col];
                if x != 0 {
                    let val = x.trailing_zeros();
                    if best.is_none_or(|(bv, _)| val < bv) {
                        best = Some((val, idx));
                    }
                }
            }
            let Some((val, idx)) = best else {
                col += 1;
                continue;
            };
            let mut prow = pending.swap_remove(idx);
            let uinv = odd_inverse(prow[col] >> val);
            for x in &mut prow[col..] {
                *x = x.wrapping_mul(uinv) & msk;
            }
            for r in pending.iter_mut() {
                let x = r[col];
                if x != 0 {
                    axpy(&mut r[col..], &prow[col..], x >> val, msk);
                }
            }
            if val > 0 {
                let shift = exp - val;
                let ann: Vec<u64> = prow.iter().map(|&x| x.wrapping_shl(shift) & msk).collect();
                if ann.iter().any(|&x| x != 0) {
                    pending.push(ann);
                }
            }
            pending.retain(|r| r.iter().any(|&x| x != 0));
            out.push((col, val, prow));
            col += 1;
        }
        // reduce entries above each pivot
        for i in (0..out.len()).rev() {
            let (pc, pv, prow) = out[i].clone();
            for (_, _, r) in out.iter_mut().take(i) {
                let x = r[pc];
                let q = x >> pv;
                if q != 0 {
                    axpy(&mut r[pc..], &prow[pc..], q, msk);
                }
            }
        }
        HowellForm { exp, cols, rows: out }
    }

    /// Reduces `v` against the rows whose pivot lies in `cols_range`, returning
    /// the remainder. If `v` lies in the span (restricted to those pivots) and
    /// the remainder's first `limit` entries are zero, `v` is in the span.
    pub fn reduce(&self, v: &mut [u64], limit: usize) {
        let msk = mask(self.exp);
        for (pc, pv, row) in &self.rows {
            if *pc >= limit {
                break;
            }
            let x = v[*pc];
            if x == 0 {
                continue;
            }
            if x.trailing_zeros() < *pv {
                return;
            }
            axpy(&mut v[*pc..], &row[*pc..], x >> pv, msk);
        }
    }

    /// Number of elements of the row span.
    pub fn span_log2(&self) -> u64 {
        self.rows.iter().map(|(_, v, _)| (self.exp - v) as u64).sum()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w, self.cols);
        w.iter().all(|&x| x == 0)
    }
}

/// Augmented elimination for `A x = b` and `ker A` over `Z/2^k`: the Howell
/// form of `[Aᵀ | I]`.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub exp: u32,
    pub eq_count: usize,
    pub var_count: usize,
    form: HowellForm,
}

impl LinearSystem {
    pub fn new(a: &ModMatrix) -> LinearSystem {
        let (m, n) = (a.rows, a.cols);
        let width = m + n;
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|j| {
                let mut r = vec![0u64; width];
                for i in 0..m {
                    r[i] = a.get(i, j);
                }
                r[m + j] = 1;
                r
            })
            .collect();
        LinearSystem { exp: a.exp, eq_count: m, var_count: n, form: HowellForm::new(rows, width, a.exp) }
    }

    /// Some `x` with `A x ≡ b`, or `None`.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.eq_count);
        let msk = mask(self.exp);
        let mut t = vec![0u64; self.eq_count + self.var_count];
        for (d, &x) in t.iter_mut().zip(b) {
            *d = x & msk;
        }
        self.form.reduce(&mut t, self.eq_count);
        if t[..self.eq_count].iter().any(|&x| x != 0) {
            return None;
        }
        Some(t[self.eq_count..].iter().map(|&x| x.wrapping_neg() & msk).collect())
    }

    /// Generators (in Howell form) of `{x : A x ≡ 0}`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        self.form
            .rows
            .iter()
            .filter(|(pc, _, _)| *pc >= self.eq_count)
            .map(|(_, _, r)| r[self.eq_count..].to_vec())
            .collect()
    }
}

/// Some `x` with `A x ≡ b (mod 2^k)`, or `None`.
pub fn solve_mod(a: &ModMatrix, b: &[u64]) -> Option<Vec<u64>> {
    let sys = LinearSystem::new(a);
    let x = sys.solve(b)?;
    debug_assert_eq!(a.mul_vec(&x), b.iter().map(|&v| v & mask(a.exp)).collect::<Vec<_>>());
    Some(x)
}

/// Generators of `{x : A x ≡ 0 (mod 2^k)}` as a `Z/2^k`-module.
pub fn kernel_mod(a: &ModMatrix) -> Vec<Vec<u64>> {
    let ker = LinearSystem::new(a).kernel();
    if cfg!(debug_assertions) {
        for v in &ker {
            assert!(a.mul_vec(v).iter().all(|&x| x == 0));
        }
    }
    ker
}

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix { rows, cols, data: entries.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_i64(r, c, &rows.iter().flatten().copied().collect::<Vec<_>>())
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let p = a * o.get(l, j);
                    *out.at(i, j) += p;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at(j, i) = self.get(i, j).clone();
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row_a -= f * row_b
    fn row_sub(&mut self, a: usize, b: usize, f: &BigInt) {
        for j in 0..self.cols {
            let d = self.get(b, j) * f;
            *self.at(a, j) -= d;
        }
    }

    fn col_sub(&mut self, a: usize, b: usize, f: &BigInt) {
        for i in 0..self.rows {
            let d = self.get(i, b) * f;
            *self.at(i, a) -= d;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let x = -self.get(a, j).clone();
            *self.at(a, j) = x;
        }
    }
}

/// `U · A · V = D` with `D` diagonal and `d_1 | d_2 | …`.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    /// Nonzero diagonal entries, positive, divisor-chained.
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn verify(&self, a: &IntMatrix) -> bool {
        self.u.mul(a).mul(&self.v) == self.d
    }
}

/// Integer Smith normal form with unimodular transforms. Pivot rule: least
/// absolute value among the remaining entries, then lowest row, then lowest
/// column. The reconstruction `U·A·V = D` is re-checked before returning.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows, a.cols);
    let mut m = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let steps = rows.min(cols);
    let mut t = 0;
    while t < steps {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = m.get(i, j);
                if !x.is_zero() {
                    let ax = x.abs();
                    if best.as_ref().is_none_or(|(b, _, _)| ax < *b) {
                        best = Some((ax, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        m.swap_rows(t, pi);
        u.swap_rows(t, pi);
        m.swap_cols(t, pj);
        v.swap_cols(t, pj);
        // reduce column and row t; restart if a smaller remainder appears
        let mut dirty = false;
        for i in t + 1..rows {
            if m.get(i, t).is_zero() {
                continue;
            }
            let q = m.get(i, t).div_floor(m.get(t, t));
            m.row_sub(i, t, &q);
            u.row_sub(i, t, &q);
            if !m.get(i, t).is_zero() {
                dirty = true;
            }
        }
        for j in t + 1..cols {
            if m.get(t, j).is_zero() {
                continue;
            }
            let q = m.get(t, j).div_floor(m.get(t, t));
            m.col_sub(j, t, &q);
            v.col_sub(j, t, &q);
            if !m.get(t, j).is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // divisibility: the pivot must divide every remaining entry
        let p = m.get(t, t).clone();
        let mut fix = None;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(m.get(i, j) % &p).is_zero() {
                    fix = Some(i);
                    break 'outer;
                }
            }
        }
        if let Some(i) = fix {
            // row_t += row_i, then redo this step
            let minus_one = -BigInt::one();
            m.row_sub(t, i, &minus_one);
            u.row_sub(t, i, &minus_one);
            continue;
        }
        if m.get(t, t).is_negative() {
            m.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors: Vec<BigInt> =
        (0..steps).map(|i| m.get(i, i).clone()).filter(|x| !x.is_zero()).collect();
    let dec = SmithDecomposition { u, v, d: m, invariant_factors };
    assert!(dec.verify(a), "Smith reconstruction U·A·V = D failed");
    dec
}

/// Homology `ker(next) / im(prev)` of an integer complex
/// `Z^a --prev--> Z^b --next--> Z^c`, as (torsion invariant factors, free rank).
pub fn integer_homology(prev: &IntMatrix, next: &IntMatrix) -> (Vec<BigInt>, usize) {
    assert_eq!(prev.rows, next.cols);
    let b = prev.rows;
    // kernel of next: columns of V beyond its rank
    let sn = smith_normal_form(next);
    let kdim = b - sn.rank();
    let mut kernel_basis = IntMatrix::zeros(b, kdim);
    for (c, j) in (sn.rank()..b).enumerate() {
        for i in 0..b {
            *kernel_basis.at(i, c) = sn.v.get(i, j).clone();
        }
    }
    // express im(prev) in the kernel basis: V^{-1} prev, last kdim rows
    let vinv = integer_inverse_unimodular(&sn.v);
    let coords_all = vinv.mul(prev);
    let mut coords = IntMatrix::zeros(kdim, prev.cols);
    for (r, i) in (sn.rank()..b).enumerate() {
        for j in 0..prev.cols {
            *coords.at(r, j) = coords_all.get(i, j).clone();
        }
    }
    debug_assert!(sn.rank() == 0 || (0..sn.rank()).all(|i| (0..prev.cols).all(|j| coords_all.get(i, j).is_zero())));
    let sc = smith_normal_form(&coords);
    let torsion: Vec<BigInt> = sc.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect();
    (torsion, kdim - sc.rank())
}

/// Inverse of a unimodular matrix by Gauss–Jordan over the integers.
pub fn integer_inverse_unimodular(a: &IntMatrix) -> IntMatrix {
    assert_eq!(a.rows, a.cols);
    let s = smith_normal_form(a);
    assert!(s.invariant_factors.len() == a.rows && s.invariant_factors.iter().all(|d| d.is_one()), "matrix is not unimodular");
    // U A V = I  =>  A^{-1} = V U
    s.v.mul(&s.u)
}
