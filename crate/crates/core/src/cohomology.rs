//! Normalized bar-resolution cohomology of finite groups.
//!
//! An `n`-cochain is stored as a table over tuples of non-identity elements
//! (normalized cochains vanish whenever an argument is the identity). Three
//! coefficient kinds are supported:
//!
//! * `Integer` — plain integers, trivial action;
//! * `Torus { exp }` — `Q/Z ≅ C*` restricted to denominators `2^exp`, values
//!   stored as numerators in `[0, 2^exp)`;
//! * `Module(A)` — a finite abelian group with an action.
//!
//! `H^n(G, Q/Z)` is computed as `H^{n+1}(G, Z)` through the connecting
//! homomorphism of `0 → Z → Q → Q/Z → 0`, never as `H^n(G, Z/2^k)`.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{FiniteGroup, GroupMap};
use crate::linalg::{self, mask, IntMatrix, LinearSystem, ModMatrix};
use crate::module::FiniteModule;

/// Default denominator exponent for torus values and working modulus
/// exponent for Smith reductions.
pub const DEFAULT_K: u32 = 12;

/// Largest coboundary matrix (rows × cols) reduced densely.
const MAX_DENSE_ENTRIES: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("cocycle has no coordinates in the computed basis (internal inconsistency)")]
    NotInGroup,
    #[error("unsupported request: {0}")]
    Unsupported(String),
    #[error("coboundary matrix {rows}×{cols} exceeds the dense limit")]
    TooLarge { rows: usize, cols: usize },
    #[error("invariant factors changed between working moduli 2^{k} and 2^{}: {a:?} vs {b:?}", k + 1)]
    Unstable { k: u32, a: Vec<u64>, b: Vec<u64> },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("cache I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache format: {0}")]
    Format(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CohomologyError>;

/// An element of `Q/Z` with a power-of-two denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusValue {
    pub numerator: u64,
    pub denominator_exp: u32,
}

impl TorusValue {
    pub fn new(numerator: i64, denominator_exp: u32) -> Self {
        TorusValue { numerator: linalg::reduce(numerator, denominator_exp), denominator_exp }
    }

    /// Lowest terms.
    pub fn normalized(self) -> Self {
        if self.numerator == 0 {
            return TorusValue { numerator: 0, denominator_exp: 0 };
        }
        let t = self.numerator.trailing_zeros().min(self.denominator_exp);
        TorusValue { numerator: self.numerator >> t, denominator_exp: self.denominator_exp - t }
    }

    /// Re-expresses the value over `2^exp`; `None` if the denominator is too large.
    pub fn at_exp(self, exp: u32) -> Option<u64> {
        let n = self.normalized();
        (n.denominator_exp <= exp).then(|| n.numerator << (exp - n.denominator_exp))
    }

    pub fn add(self, other: TorusValue) -> TorusValue {
        let e = self.denominator_exp.max(other.denominator_exp);
        let a = self.numerator << (e - self.denominator_exp);
        let b = other.numerator << (e - other.denominator_exp);
        TorusValue::new((a + b) as i64, e).normalized()
    }

    pub fn as_f64(self) -> f64 {
        self.numerator as f64 / (1u64 << self.denominator_exp) as f64
    }
}

impl std::fmt::Display for TorusValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.normalized();
        write!(f, "{}/{}", n.numerator, 1u64 << n.denominator_exp)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    Integer,
    Torus { exp: u32 },
    Module(FiniteModule),
}

impl Coefficients {
    pub fn torus() -> Self {
        Coefficients::Torus { exp: DEFAULT_K }
    }

    pub fn rank(&self) -> usize {
        match self {
            Coefficients::Module(m) => m.rank(),
            _ => 1,
        }
    }

    /// Short label used in cache keys and reports.
    pub fn label(&self) -> String {
        match self {
            Coefficients::Integer => "int".into(),
            Coefficients::Torus { .. } => "torus".into(),
            Coefficients::Module(m) => format!("module{:?}{:?}", m.factors, m.action),
        }
    }

    #[inline]
    fn reduce(&self, comp: usize, v: i64) -> i64 {
        match self {
            Coefficients::Integer => v,
            Coefficients::Torus { exp } => v.rem_euclid(1i64 << exp),
            Coefficients::Module(m) => v.rem_euclid(m.factors[comp] as i64),
        }
    }

    /// `g · v` for a value vector.
    fn act(&self, g: usize, v: &[i64]) -> Vec<i64> {
        match self {
            Coefficients::Module(m) if g != 0 => {
                let r = m.rank();
                let mat = &m.action[g];
                (0..r).map(|i| (0..r).map(|j| mat[i * r + j] * v[j]).sum()).collect()
            }
            _ => v.to_vec(),
        }
    }
}

/// Number of normalized `n`-tuples over a group of the given order.
pub fn tuple_count(order: usize, degree: usize) -> usize {
    (order.saturating_sub(1)).pow(degree as u32)
}

/// Position of a tuple of non-identity elements; `None` if some entry is the identity.
#[inline]
pub fn tuple_index(order: usize, tuple: &[usize]) -> Option<usize> {
    let m = order - 1;
    let mut idx = 0;
    for &g in tuple {
        if g == 0 {
            return None;
        }
        idx = idx * m + (g - 1);
    }
    Some(idx)
}

#[inline]
pub fn tuple_at(order: usize, degree: usize, mut idx: usize, out: &mut [usize]) {
    let m = order - 1;
    for slot in out[..degree].iter_mut().rev() {
        *slot = idx % m + 1;
        idx /= m;
    }
}

/// A normalized cochain: `values[tuple_index * rank + component]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cochain {
    pub degree: usize,
    pub group_order: usize,
    pub coeffs: Coefficients,
    pub values: Vec<i64>,
}

impl Cochain {
    pub fn zeros(group_order: usize, degree: usize, coeffs: Coefficients) -> Self {
        let len = tuple_count(group_order, degree) * coeffs.rank();
        Cochain { degree, group_order, coeffs, values: vec![0; len] }
    }

    /// Builds a cochain by evaluating `f` on every tuple of non-identity
    /// elements; `f` returns one value per module component.
    pub fn from_fn(group_order: usize, degree: usize, coeffs: Coefficients, mut f: impl FnMut(&[usize]) -> Vec<i64>) -> Self {
        let mut c = Cochain::zeros(group_order, degree, coeffs);
        let r = c.rank();
        let mut t = vec![0usize; degree];
        for idx in 0..tuple_count(group_order, degree) {
            tuple_at(group_order, degree, idx, &mut t);
            let v = f(&t);
            for (comp, &x) in v.iter().enumerate().take(r) {
                c.values[idx * r + comp] = c.coeffs.reduce(comp, x);
            }
        }
        c
    }

    pub fn rank(&self) -> usize {
        self.coeffs.rank()
    }

    pub fn tuples(&self) -> usize {
        tuple_count(self.group_order, self.degree)
    }

    /// Value at an arbitrary tuple (zero if it contains the identity).
    pub fn get(&self, tuple: &[usize]) -> Vec<i64> {
        let r = self.rank();
        match tuple_index(self.group_order, tuple) {
            Some(i) => self.values[i * r..(i + 1) * r].to_vec(),
            None => vec![0; r],
        }
    }

    /// Scalar value (rank-one coefficients).
    #[inline]
    pub fn value(&self, tuple: &[usize]) -> i64 {
        debug_assert_eq!(self.rank(), 1);
        match tuple_index(self.group_order, tuple) {
            Some(i) => self.values[i],
            None => 0,
        }
    }

    pub fn torus_value(&self, tuple: &[usize]) -> TorusValue {
        match self.coeffs {
            Coefficients::Torus { exp } => TorusValue::new(self.value(tuple), exp),
            _ => panic!("not a torus cochain"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    fn reduce_all(&mut self) {
        let r = self.rank();
        for (i, v) in self.values.iter_mut().enumerate() {
            *v = self.coeffs.reduce(i % r, *v);
        }
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!((self.degree, self.group_order), (other.degree, other.group_order));
        assert_eq!(self.coeffs, other.coeffs);
        let mut out = self.clone();
        for (a, b) in out.values.iter_mut().zip(&other.values) {
            *a += b;
        }
        out.reduce_all();
        out
    }

    pub fn scale(&self, s: i64) -> Cochain {
        let mut out = self.clone();
        for a in out.values.iter_mut() {
            *a *= s;
        }
        out.reduce_all();
        out
    }

    pub fn neg(&self) -> Cochain {
        self.scale(-1)
    }

    /// Same numerators reinterpreted over a different torus denominator.
    pub fn with_torus_exp(&self, exp: u32) -> Cochain {
        let Coefficients::Torus { exp: old } = self.coeffs else { panic!("not a torus cochain") };
        let mut out = self.clone();
        out.coeffs = Coefficients::Torus { exp };
        for v in out.values.iter_mut() {
            *v = if exp >= old { *v << (exp - old) } else { *v >> (old - exp) };
        }
        out
    }

    pub fn is_cocycle(&self, group: &FiniteGroup) -> bool {
        coboundary(group, self).is_zero()
    }
}

/// The normalized bar differential
/// `(δf)(g_1..g_{n+1}) = g_1·f(g_2..) + Σ (−1)^i f(.., g_i g_{i+1}, ..) + (−1)^{n+1} f(g_1..g_n)`.
pub fn coboundary(group: &FiniteGroup, f: &Cochain) -> Cochain {
    assert_eq!(group.order(), f.group_order, "cochain belongs to a group of different order");
    if let Coefficients::Module(m) = &f.coeffs {
        assert_eq!(m.acting_order, group.order());
    }
    let n = f.degree;
    let order = group.order();
    let r = f.rank();
    let mut out = Cochain::zeros(order, n + 1, f.coeffs.clone());
    if order == 1 {
        return out;
    }
    let mut t = vec![0usize; n + 1];
    let mut buf = vec![0usize; n];
    let mut acc = vec![0i64; r];
    for row in 0..out.tuples() {
        tuple_at(order, n + 1, row, &mut t);
        let head = f.coeffs.act(t[0], &f.get(&t[1..]));
        acc.copy_from_slice(&head);
        for i in 0..n {
            let p = group.mul(t[i], t[i + 1]);
            if p == 0 {
                continue;
            }
            buf[..i].copy_from_slice(&t[..i]);
            buf[i] = p;
            buf[i + 1..].copy_from_slice(&t[i + 2..]);
            let sign = if i % 2 == 0 { -1 } else { 1 };
            if let Some(ix) = tuple_index(order, &buf) {
                for c in 0..r {
                    acc[c] += sign * f.values[ix * r + c];
                }
            }
        }
        let sign = if n.is_multiple_of(2) { -1 } else { 1 };
        if let Some(ix) = tuple_index(order, &t[..n]) {
            for c in 0..r {
                acc[c] += sign * f.values[ix * r + c];
            }
        }
        for c in 0..r {
            out.values[row * r + c] = f.coeffs.reduce(c, acc[c]);
        }
    }
    out
}

/// Sparse integer matrix of `δ: C^n → C^{n+1}` for the given coefficients
/// (module actions contribute their matrices; torus/integer act trivially).
/// Returns `(rows, cols, entries)`.
pub fn coboundary_matrix(group: &FiniteGroup, degree: usize, coeffs: &Coefficients) -> (usize, usize, Vec<(usize, usize, i64)>) {
    let order = group.order();
    let r = coeffs.rank();
    let rows = tuple_count(order, degree + 1) * r;
    let cols = tuple_count(order, degree) * r;
    let mut entries = Vec::new();
    if order == 1 || r == 0 {
        return (rows, cols, entries);
    }
    let n = degree;
    let mut t = vec![0usize; n + 1];
    let mut buf = vec![0usize; n];
    for row in 0..tuple_count(order, n + 1) {
        tuple_at(order, n + 1, row, &mut t);
        if let Some(col) = tuple_index(order, &t[1..]) {
            match coeffs {
                Coefficients::Module(m) => {
                    let mat = &m.action[t[0]];
                    for i in 0..r {
                        for j in 0..r {
                            if mat[i * r + j] != 0 {
                                entries.push((row * r + i, col * r + j, mat[i * r + j]));
                            }
                        }
                    }
                }
                _ => entries.push((row, col, 1)),
            }
        }
        for i in 0..n {
            let p = group.mul(t[i], t[i + 1]);
            if p == 0 {
                continue;
            }
            buf[..i].copy_from_slice(&t[..i]);
            buf[i] = p;
            buf[i + 1..].copy_from_slice(&t[i + 2..]);
            let sign = if i % 2 == 0 { -1 } else { 1 };
            let col = tuple_index(order, &buf).expect("non-identity tuple");
            for c in 0..r {
                entries.push((row * r + c, col * r + c, sign));
            }
        }
        let sign = if n.is_multiple_of(2) { -1 } else { 1 };
        if let Some(col) = tuple_index(order, &t[..n]) {
            for c in 0..r {
                entries.push((row * r + c, col * r + c, sign));
            }
        }
    }
    (rows, cols, entries)
}

/// Dense reduction of a sparse integer matrix modulo `2^exp`, optionally with
/// row `i` multiplied by `2^{row_shift[i % len]}`.
fn dense_mod(rows: usize, cols: usize, entries: &[(usize, usize, i64)], exp: u32, row_shift: &[u32]) -> ModMatrix {
    let mut m = ModMatrix::zeros(rows, cols, exp);
    for &(i, j, v) in entries {
        let s = if row_shift.is_empty() { 0 } else { row_shift[i % row_shift.len()] };
        m.add_at(i, j, v.wrapping_shl(s));
    }
    m
}

/// Pullback `(φ*η)(h_1..h_n) = η(φh_1..φh_n)` along `φ: source → target`,
/// where `η` lives on the target. Inflation and restriction are special cases.
pub fn pullback(phi: &GroupMap, eta: &Cochain) -> Cochain {
    let source_order = phi.images.len();
    let mut out = Cochain::zeros(source_order, eta.degree, eta.coeffs.clone());
    if source_order == 1 {
        return out;
    }
    let r = eta.rank();
    let n = eta.degree;
    let mut t = vec![0usize; n];
    let mut img = vec![0usize; n];
    for idx in 0..out.tuples() {
        tuple_at(source_order, n, idx, &mut t);
        for (d, &s) in img.iter_mut().zip(&t) {
            *d = phi.apply(s);
        }
        if let Some(ix) = tuple_index(eta.group_order, &img) {
            out.values[idx * r..(idx + 1) * r].copy_from_slice(&eta.values[ix * r..(ix + 1) * r]);
        }
    }
    out
}

/// Inflation along a surjection `π: G → K`.
pub fn inflation(pi: &GroupMap, kappa: &Cochain) -> Cochain {
    pullback(pi, kappa)
}

/// Restriction to a subgroup given by its inclusion map.
pub fn restriction(inclusion: &GroupMap, eta: &Cochain) -> Cochain {
    pullback(inclusion, eta)
}

/// Coordinates solver: the Howell form of `[basis | boundaries]` over `Z/2^M`.
#[derive(Debug, Clone)]
struct CoordinateSolver {
    exp: u32,
    system: LinearSystem,
    /// Left shift applied to input values of component `c`.
    input_shift: Vec<u32>,
    basis_len: usize,
}

impl CoordinateSolver {
    fn convert(&self, c: &Cochain) -> Vec<u64> {
        let r = self.input_shift.len();
        c.values
            .iter()
            .enumerate()
            .map(|(i, &v)| linalg::reduce(v, self.exp).wrapping_shl(self.input_shift[i % r]) & mask(self.exp))
            .collect()
    }

    fn solve(&self, c: &Cochain) -> Option<Vec<u64>> {
        let x = self.system.solve(&self.convert(c))?;
        Some(x[..self.basis_len].to_vec())
    }
}

/// `H^n(G, coefficients)` with invariant factors, basis cocycles and a
/// coordinate solver.
#[derive(Debug, Clone)]
pub struct CohomologyGroup {
    pub group_hash: String,
    pub group_order: usize,
    pub degree: usize,
    pub coeffs: Coefficients,
    /// Working modulus exponent of the Smith reductions.
    pub k: u32,
    /// `d_1 | d_2 | …`, all > 1.
    pub invariant_factors: Vec<u64>,
    /// One cocycle per invariant factor; basis element `i` has order `d_i`.
    pub basis: Vec<Cochain>,
    solver: CoordinateSolver,
}

impl CohomologyGroup {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn radix(&self) -> crate::groups::MixedRadix {
        crate::groups::MixedRadix::new(self.invariant_factors.clone())
    }

    /// Coordinates `(c_i mod d_i)` of the class of a cocycle.
    pub fn class_coordinates(&self, group: &FiniteGroup, eta: &Cochain) -> Result<Vec<u64>> {
        if eta.degree != self.degree || eta.group_order != self.group_order {
            return Err(CohomologyError::Unsupported("cochain shape does not match the cohomology group".into()));
        }
        let eta = self.conform(eta)?;
        if !eta.is_cocycle(group) {
            return Err(CohomologyError::NotACocycle);
        }
        self.coordinates_unchecked(&eta)
    }

    /// Coordinates of a cochain already known to be a cocycle.
    pub fn coordinates_unchecked(&self, eta: &Cochain) -> Result<Vec<u64>> {
        let eta = self.conform(eta)?;
        let x = self.solver.solve(&eta).ok_or(CohomologyError::NotInGroup)?;
        Ok(x.iter().zip(&self.invariant_factors).map(|(&v, &d)| v % d).collect())
    }

    fn conform(&self, eta: &Cochain) -> Result<Cochain> {
        match (&self.coeffs, &eta.coeffs) {
            (Coefficients::Torus { exp: a }, Coefficients::Torus { exp: b }) if a != b => {
                if b > a && eta.values.iter().any(|&v| v & ((1i64 << (b - a)) - 1) != 0) {
                    return Err(CohomologyError::Unsupported("torus denominator exceeds the working precision".into()));
                }
                Ok(eta.with_torus_exp(*a))
            }
            (x, y) if x == y => Ok(eta.clone()),
            _ => Err(CohomologyError::Unsupported("coefficient mismatch".into())),
        }
    }

    /// The cocycle `Σ c_i · basis_i`.
    pub fn representative(&self, coords: &[u64]) -> Cochain {
        let mut out = Cochain::zeros(self.group_order, self.degree, self.coeffs.clone());
        for (b, &c) in self.basis.iter().zip(coords) {
            if c != 0 {
                out = out.add(&b.scale(c as i64));
            }
        }
        out
    }

    /// Order of the class with the given coordinates.
    pub fn class_order(&self, coords: &[u64]) -> u64 {
        coords
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&c, &d)| d / num_integer::gcd(c % d, d))
            .fold(1, num_integer::lcm)
    }

    pub fn add_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.invariant_factors).map(|((&x, &y), &d)| (x + y) % d).collect()
    }
}

fn log2_exact(x: u64) -> u32 {
    assert!(x.is_power_of_two());
    x.trailing_zeros()
}

fn check_two_group(group: &FiniteGroup) -> Result<()> {
    if group.order().is_power_of_two() {
        Ok(())
    } else {
        Err(CohomologyError::Unsupported(format!("groups of order {} (only 2-groups are supported)", group.order())))
    }
}

/// Smith data of the integral coboundary `δ_n: C^n → C^{n+1}` modulo `2^k`:
/// the pairs `(e_i, g_i)` with `0 < e_i < k`, where `δ g_i ≡ 2^{e_i}·(basis column)`.
/// Recomputed modulo `2^{k+1}` and asserted identical.
fn integral_torsion(group: &FiniteGroup, n: usize, k: u32) -> Result<Vec<(u32, Vec<u64>)>> {
    let (rows, cols, entries) = coboundary_matrix(group, n, &Coefficients::Integer);
    if rows.saturating_mul(cols) > MAX_DENSE_ENTRIES {
        return Err(CohomologyError::TooLarge { rows, cols });
    }
    let run = |kk: u32| {
        let a = dense_mod(rows, cols, &entries, kk, &[]);
        let s = linalg::smith_mod(&a, false);
        (a, s)
    };
    let (a, s) = run(k);
    if !linalg::verify_smith_columns(&a, &s) {
        return Err(CohomologyError::Verification("Smith column identity failed".into()));
    }
    let factors = |s: &linalg::ModSmith| -> Vec<u64> {
        s.diagonal.iter().filter(|&&e| e > 0 && e < s.exp).map(|&e| 1u64 << e).collect()
    };
    let (_, s2) = run(k + 1);
    let (fa, fb) = (factors(&s), factors(&s2));
    if fa != fb {
        return Err(CohomologyError::Unstable { k, a: fa, b: fb });
    }
    Ok(s.diagonal
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0 && e < k)
        .map(|(i, &e)| (e, s.v.column(i)))
        .collect())
}

/// Computes `H^n(G, coefficients)`; results are memoized per process.
pub fn cohomology_group(group: &FiniteGroup, degree: usize, coeffs: &Coefficients, k: u32) -> Result<Arc<CohomologyGroup>> {
    static MEMO: OnceLock<Mutex<HashMap<String, Arc<CohomologyGroup>>>> = OnceLock::new();
    let key = format!("{}|{}|{}|{:?}|{}", group.table_hash(), degree, coeffs.label(), coeffs, k);
    let memo = MEMO.get_or_init(Default::default);
    if let Some(h) = memo.lock().unwrap().get(&key) {
        return Ok(h.clone());
    }
    let h = Arc::new(compute_cohomology(group, degree, coeffs, k)?);
    memo.lock().unwrap().insert(key, h.clone());
    Ok(h)
}

fn compute_cohomology(group: &FiniteGroup, degree: usize, coeffs: &Coefficients, k: u32) -> Result<CohomologyGroup> {
    check_two_group(group)?;
    match coeffs {
        Coefficients::Integer => {
            if degree == 0 {
                return Err(CohomologyError::Unsupported("H^0(G, Z) is free".into()));
            }
            let torsion = integral_torsion(group, degree - 1, k)?;
            let mut factors = Vec::new();
            let mut basis = Vec::new();
            for (e, g) in torsion {
                let lift = Cochain {
                    degree: degree - 1,
                    group_order: group.order(),
                    coeffs: Coefficients::Integer,
                    values: g.iter().map(|&x| x as i64).collect(),
                };
                let mut c = coboundary(group, &lift);
                for v in c.values.iter_mut() {
                    debug_assert_eq!(*v % (1i64 << e), 0);
                    *v >>= e;
                }
                factors.push(1u64 << e);
                basis.push(c);
            }
            from_parts(group, degree, coeffs.clone(), k, factors, basis)
        }
        Coefficients::Torus { exp } => {
            if degree == 0 {
                return Err(CohomologyError::Unsupported("H^0(G, Q/Z) is infinite".into()));
            }
            let torsion = integral_torsion(group, degree, k)?;
            let mut factors = Vec::new();
            let mut basis = Vec::new();
            for (e, g) in torsion {
                if e > *exp {
                    return Err(CohomologyError::Unsupported(format!("class of order 2^{e} exceeds torus precision 2^{exp}")));
                }
                let values = g.iter().map(|&x| ((x & mask(e)) << (exp - e)) as i64).collect();
                factors.push(1u64 << e);
                basis.push(Cochain { degree, group_order: group.order(), coeffs: coeffs.clone(), values });
            }
            from_parts(group, degree, coeffs.clone(), k, factors, basis)
        }
        Coefficients::Module(m) => module_cohomology(group, degree, m, k),
    }
}

/// Row shifts embedding `⊕ Z/d_i` into `(Z/2^e)^r`.
fn module_shifts(m: &FiniteModule, e: u32) -> Vec<u32> {
    m.factors.iter().map(|&d| e - log2_exact(d)).collect()
}

fn module_cohomology(group: &FiniteGroup, degree: usize, m: &FiniteModule, k: u32) -> Result<CohomologyGroup> {
    let coeffs = Coefficients::Module(m.clone());
    let e = match m.exponent_log2() {
        Some(e) => e,
        None => return Err(CohomologyError::Unsupported("module is not a 2-group".into())),
    };
    let r = m.rank();
    let cn = tuple_count(group.order(), degree) * r;
    if e == 0 || cn == 0 {
        return from_parts(group, degree, coeffs, k, vec![], vec![]);
    }
    let shifts = module_shifts(m, e);
    // cocycles: kernel of the row-scaled δ_n
    let (rows, cols, ent) = coboundary_matrix(group, degree, &coeffs);
    let dn = dense_mod(rows, cols, &ent, e, &shifts);
    let z = linalg::kernel_mod(&dn);
    // boundaries in x-coordinates: δ_{n-1} columns plus d_j e_j
    let mut b_cols: Vec<Vec<u64>> = Vec::new();
    if degree > 0 {
        let (r2, c2, ent2) = coboundary_matrix(group, degree - 1, &coeffs);
        let dm = dense_mod(r2, c2, &ent2, e, &[]);
        b_cols.extend((0..c2).map(|j| dm.column(j)));
    }
    for i in 0..cn {
        let d = m.factors[i % r];
        let mut v = vec![0u64; cn];
        v[i] = d & mask(e);
        if v[i] != 0 {
            b_cols.push(v);
        }
    }
    // relations among the cocycle generators modulo boundaries
    let mut cols_all: Vec<Vec<u64>> = z.clone();
    cols_all.extend(b_cols.iter().cloned());
    let combined = ModMatrix::from_columns(cn, e, &cols_all);
    let rel: Vec<Vec<u64>> = linalg::kernel_mod(&combined).into_iter().map(|v| v[..z.len()].to_vec()).collect();
    let nz = z.len();
    let tmat = ModMatrix::from_columns(nz, e, &rel).transpose();
    let snf = linalg::smith_mod(&tmat, false);
    // basis element i ↔ row i of V^{-1}
    let vsys = LinearSystem::new(&snf.v);
    let mut vinv_rows = vec![vec![0u64; nz]; nz];
    for j in 0..nz {
        let mut ej = vec![0u64; nz];
        ej[j] = 1;
        let col = vsys.solve(&ej).ok_or_else(|| CohomologyError::Verification("column transform not invertible".into()))?;
        for i in 0..nz {
            vinv_rows[i][j] = col[i];
        }
    }
    let mut factors = Vec::new();
    let mut basis = Vec::new();
    for i in 0..nz {
        let v = snf.diagonal.get(i).copied().unwrap_or(e).min(e);
        if v == 0 {
            continue;
        }
        let mut vals = vec![0u64; cn];
        for (j, zj) in z.iter().enumerate() {
            let c = vinv_rows[i][j];
            if c != 0 {
                for (d, &x) in vals.iter_mut().zip(zj) {
                    *d = d.wrapping_add(c.wrapping_mul(x)) & mask(e);
                }
            }
        }
        let mut coch = Cochain { degree, group_order: group.order(), coeffs: coeffs.clone(), values: vals.iter().map(|&x| x as i64).collect() };
        coch.reduce_all();
        factors.push(1u64 << v);
        basis.push(coch);
    }
    // ascending divisor chain
    let mut idx: Vec<usize> = (0..factors.len()).collect();
    idx.sort_by_key(|&i| factors[i]);
    let factors = idx.iter().map(|&i| factors[i]).collect();
    let basis = idx.iter().map(|&i| basis[i].clone()).collect();
    from_parts(group, degree, coeffs, k, factors, basis)
}

/// Assembles a cohomology group from invariant factors and basis cocycles,
/// building the coordinate solver and verifying that the basis is
/// independent with the stated orders.
pub fn from_parts(
    group: &FiniteGroup,
    degree: usize,
    coeffs: Coefficients,
    k: u32,
    factors: Vec<u64>,
    basis: Vec<Cochain>,
) -> Result<CohomologyGroup> {
    let order = group.order();
    for b in &basis {
        if !b.is_cocycle(group) {
            return Err(CohomologyError::NotACocycle);
        }
    }
    let rank = coeffs.rank();
    let cn = tuple_count(order, degree) * rank;
    let (exp, input_shift, boundary_shift): (u32, Vec<u32>, Vec<u32>) = match &coeffs {
        Coefficients::Integer => (k, vec![0], vec![]),
        Coefficients::Torus { exp } => {
            let m = exp + log2_exact(order as u64);
            (m, vec![m - exp], vec![])
        }
        Coefficients::Module(m) => {
            let e = m.exponent_log2().unwrap_or(0).max(1);
            let s = module_shifts(m, e);
            (e, s.clone(), s)
        }
    };
    let mut solver_cols: Vec<Vec<u64>> = Vec::new();
    let proto = CoordinateSolver { exp, system: LinearSystem::new(&ModMatrix::zeros(0, 0, exp)), input_shift: input_shift.clone(), basis_len: basis.len() };
    for b in &basis {
        solver_cols.push(proto.convert(b));
    }
    if degree > 0 && cn > 0 {
        let (r2, c2, ent2) = coboundary_matrix(group, degree - 1, &coeffs);
        let dm = dense_mod(r2, c2, &ent2, exp, &boundary_shift);
        solver_cols.extend((0..c2).map(|j| dm.column(j)));
    }
    let sys_matrix = ModMatrix::from_columns(cn, exp, &solver_cols);
    let system = LinearSystem::new(&sys_matrix);
    // uniqueness: every relation has c_i ≡ 0 mod d_i
    for v in system.kernel() {
        for (i, &d) in factors.iter().enumerate() {
            if v[i] % d != 0 {
                return Err(CohomologyError::Verification(format!("basis element {i} is not independent of order {d}")));
            }
        }
    }
    let solver = CoordinateSolver { exp, system, input_shift, basis_len: basis.len() };
    let h = CohomologyGroup { group_hash: group.table_hash(), group_order: order, degree, coeffs, k, invariant_factors: factors, basis, solver };
    for (i, b) in h.basis.iter().enumerate() {
        let c = h.coordinates_unchecked(b)?;
        let expect: Vec<u64> = (0..h.basis.len()).map(|j| (i == j) as u64).collect();
        if c != expect {
            return Err(CohomologyError::Verification(format!("coordinates of basis element {i} are {c:?}")));
        }
        if !h.coordinates_unchecked(&b.scale(h.invariant_factors[i] as i64))?.iter().all(|&x| x == 0) {
            return Err(CohomologyError::Verification(format!("basis element {i} has order exceeding {}", h.invariant_factors[i])));
        }
    }
    Ok(h)
}

/// `H^3(G, C*)` with torus-valued basis cocycles from the connecting construction.
pub fn torus_h3(group: &FiniteGroup) -> Result<Arc<CohomologyGroup>> {
    cohomology_group(group, 3, &Coefficients::torus(), DEFAULT_K)
}

/// On-disk cache record of a cohomology group with integral or torus coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub group_hash: String,
    pub degree: usize,
    pub coeffs: String,
    pub k: u32,
    pub invariant_factors: Vec<u64>,
    pub basis: Vec<CachedCochain>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedCochain {
    pub values: Vec<(Vec<usize>, i64)>,
    pub denominator_exp: u32,
}

impl CacheRecord {
    pub fn from_group(h: &CohomologyGroup) -> Option<CacheRecord> {
        let denominator_exp = match h.coeffs {
            Coefficients::Integer => 0,
            Coefficients::Torus { exp } => exp,
            Coefficients::Module(_) => return None,
        };
        let basis = h
            .basis
            .iter()
            .map(|b| {
                let mut t = vec![0usize; b.degree];
                let values = (0..b.tuples())
                    .filter(|&i| b.values[i] != 0)
                    .map(|i| {
                        tuple_at(b.group_order, b.degree, i, &mut t);
                        (t.clone(), b.values[i])
                    })
                    .collect();
                CachedCochain { values, denominator_exp }
            })
            .collect();
        Some(CacheRecord { group_hash: h.group_hash.clone(), degree: h.degree, coeffs: h.coeffs.label(), k: h.k, invariant_factors: h.invariant_factors.clone(), basis })
    }

    /// Rebuilds (and re-verifies) the cohomology group for `group`.
    pub fn restore(&self, group: &FiniteGroup) -> Result<CohomologyGroup> {
        if self.group_hash != group.table_hash() {
            return Err(CohomologyError::Verification("cache entry belongs to another group".into()));
        }
        let coeffs = match self.coeffs.as_str() {
            "int" => Coefficients::Integer,
            "torus" => Coefficients::Torus { exp: self.basis.first().map_or(self.k, |b| b.denominator_exp) },
            other => return Err(CohomologyError::Unsupported(format!("cached coefficients {other}"))),
        };
        let basis = self
            .basis
            .iter()
            .map(|b| {
                let mut c = Cochain::zeros(group.order(), self.degree, coeffs.clone());
                for (t, v) in &b.values {
                    let i = tuple_index(group.order(), t).ok_or_else(|| CohomologyError::Verification("identity in cached tuple".into()))?;
                    c.values[i] = *v;
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        from_parts(group, self.degree, coeffs, self.k, self.invariant_factors.clone(), basis)
    }
}

fn cache_file(dir: &Path, group: &FiniteGroup, degree: usize, coeffs: &Coefficients, k: u32) -> std::path::PathBuf {
    dir.join(format!("{}-{}-{}-{}.json", group.table_hash(), degree, coeffs.label(), k))
}

/// Cohomology with a disk cache; writes go through a temporary file and an
/// atomic rename.
pub fn cohomology_cached(dir: &Path, group: &FiniteGroup, degree: usize, coeffs: &Coefficients, k: u32) -> Result<Arc<CohomologyGroup>> {
    let path = cache_file(dir, group, degree, coeffs, k);
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(rec) = serde_json::from_str::<CacheRecord>(&text) {
            if let Ok(h) = rec.restore(group) {
                return Ok(Arc::new(h));
            }
        }
        log::warn!("ignoring unusable cache entry {}", path.display());
    }
    let h = cohomology_group(group, degree, coeffs, k)?;
    if let Some(rec) = CacheRecord::from_group(&h) {
        std::fs::create_dir_all(dir)?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, serde_json::to_vec(&rec)?)?;
        std::fs::rename(&tmp, &path)?;
    }
    Ok(h)
}

/// Right multiplication by a group-ring element of `Z[G]`, as a matrix on
/// the coordinates of `Z[G]` (column `x` is the image of the basis element `x`).
fn right_mult(group: &FiniteGroup, elem: &[(usize, i64)]) -> Vec<Vec<i64>> {
    let n = group.order();
    let mut m = vec![vec![0i64; n]; n];
    for x in 0..n {
        for &(g, c) in elem {
            m[group.mul(x, g)][x] += c;
        }
    }
    m
}

/// Block matrix of a `Z[G]`-linear map `Z[G]^a → Z[G]^b` given by right
/// multiplication: `blocks[i][j]` is the ring element applied from input `j` to output `i`.
fn free_map(group: &FiniteGroup, blocks: &[Vec<Vec<(usize, i64)>>]) -> (IntMatrix, Vec<Vec<i64>>) {
    let n = group.order();
    let outs = blocks.len();
    let ins = blocks[0].len();
    let mut z = IntMatrix::zeros(outs * n, ins * n);
    let mut aug = vec![vec![0i64; ins]; outs];
    for (i, row) in blocks.iter().enumerate() {
        for (j, elem) in row.iter().enumerate() {
            let m = right_mult(group, elem);
            for (r, mr) in m.iter().enumerate() {
                for (c, &v) in mr.iter().enumerate() {
                    z.data[(i * n + r) * (ins * n) + j * n + c] = BigInt::from(v);
                }
            }
            aug[i][j] = elem.iter().map(|&(_, c)| c).sum();
        }
    }
    (z, aug)
}

/// `H^4(Q8, Z)` from the explicit 4-periodic free resolution of `Z` over
/// `Z[Q8]`. The group-ring differentials are checked to form a complex, the
/// functor `Hom_{Z[Q8]}(−, Z)` is applied (right multiplication by `x`
/// dualizes to multiplication by its augmentation), and the degree-4
/// cohomology is read off by integer Smith normal form.
pub fn q8_periodic_h4() -> Vec<u64> {
    let q = crate::groups::Order8::Q8.group();
    // elements: 0=1, 1=−1, 2=i, 4=j, 6=k
    let (one, i, j) = (0usize, 2usize, 4usize);
    let ij = q.mul(i, j);
    let d1 = vec![vec![vec![(i, 1), (one, -1)], vec![(j, 1), (one, -1)]]];
    let d2 = vec![
        vec![vec![(i, 1), (one, 1)], vec![(ij, 1), (one, 1)]],
        vec![vec![(j, -1), (one, -1)], vec![(i, 1), (one, -1)]],
    ];
    let d3 = vec![vec![vec![(i, 1), (one, -1)]], vec![vec![(ij, -1), (one, 1)]]];
    let d4 = vec![vec![(0..8).map(|t| (t, 1)).collect::<Vec<_>>()]];
    let maps: Vec<(IntMatrix, Vec<Vec<i64>>)> = [d1, d2, d3, d4].iter().map(|b| free_map(&q, b)).collect();
    // complex property, including the periodic wrap δ4 → δ1
    let zero = |m: &IntMatrix| m.data.iter().all(|x| x == &BigInt::from(0));
    for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
        // δ_a ∘ δ_b as Z-matrices: apply δ_b first
        let comp = maps[a].0.mul(&maps[b].0);
        assert!(zero(&comp), "δ{}∘δ{} ≠ 0", a + 1, b + 1);
    }
    let dual = |aug: &Vec<Vec<i64>>| IntMatrix::from_rows(&(0..aug[0].len()).map(|c| aug.iter().map(|row| row[c]).collect()).collect::<Vec<_>>());
    // degree 3 → 4 is dual of δ4, degree 4 → 5 is dual of δ1
    let prev = dual(&maps[3].1);
    let next = dual(&maps[0].1);
    let (torsion, free) = linalg::integer_homology(&prev, &next);
    assert_eq!(free, 0);
    torsion.iter().map(|d| d.to_u64().expect("small")).collect()
}
