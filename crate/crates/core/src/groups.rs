//! Finite groups given by multiplication tables.
//!
//! Element `0` is always the identity. Groups are small (order at most 64),
//! so subgroup lattices, automorphism groups and isomorphisms are found by
//! brute force over generator images.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_ORDER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("table is empty or not square")]
    NotSquare,
    #[error("entry table[{row}][{col}] = {value} is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("element 0 is not a two-sided identity (fails at element {0})")]
    NoIdentity(usize),
    #[error("not a Latin square: {kind} {index} repeats value {value}")]
    NotLatinSquare { kind: &'static str, index: usize, value: usize },
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("group of order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(usize),
    #[error("map is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("invalid group file: {0}")]
    Parse(String),
}

/// A finite group stored as a flat row-major multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

/// On-disk group description: `{"name": ..., "order": n, "table": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupFile {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Validates `table` (with `table[i][j] = i*j`) and builds the group.
    pub fn new(name: impl Into<String>, table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) {
            return Err(GroupError::NotSquare);
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        for (i, row) in table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::OutOfRange { row: i, col: j, value: v });
                }
            }
        }
        for i in 0..n {
            let mut seen = vec![false; n];
            for j in 0..n {
                let v = table[i][j];
                if seen[v] {
                    return Err(GroupError::NotLatinSquare { kind: "row", index: i, value: v });
                }
                seen[v] = true;
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for i in 0..n {
                let v = table[i][j];
                if seen[v] {
                    return Err(GroupError::NotLatinSquare { kind: "column", index: j, value: v });
                }
                seen[v] = true;
            }
        }
        for x in 0..n {
            if table[0][x] != x || table[x][0] != x {
                return Err(GroupError::NoIdentity(x));
            }
        }
        let mut inverses = vec![usize::MAX; n];
        for x in 0..n {
            let y = (0..n).find(|&y| table[x][y] == 0).ok_or(GroupError::NoInverse(x))?;
            if table[y][x] != 0 {
                return Err(GroupError::NoInverse(x));
            }
            inverses[x] = y;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name: name.into(),
            order: n,
            table: table.iter().flatten().copied().collect(),
            inverses,
        })
    }

    pub fn from_fn(
        name: impl Into<String>,
        order: usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GroupError> {
        let table: Vec<Vec<usize>> =
            (0..order).map(|i| (0..order).map(|j| mul(i, j)).collect()).collect();
        Self::new(name, &table)
    }

    pub fn from_file(file: &GroupFile) -> Result<Self, GroupError> {
        if file.order != file.table.len() {
            return Err(GroupError::Parse(format!(
                "order {} does not match table size {}",
                file.order,
                file.table.len()
            )));
        }
        Self::new(file.name.clone(), &file.table)
    }

    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        let file: GroupFile =
            serde_json::from_str(text).map_err(|e| GroupError::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile { name: self.name.clone(), order: self.order, table: self.table_rows() }
    }

    pub fn trivial() -> Self {
        FiniteGroup { name: "1".into(), order: 1, table: vec![0], inverses: vec![0] }
    }

    /// Cyclic group `Z/n` with element `i` standing for the residue `i`.
    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(format!("Z/{n}"), n, |a, b| (a + b) % n).expect("cyclic group")
    }

    /// Direct sum of cyclic groups, elements in lexicographic coordinate order
    /// (first coordinate most significant).
    pub fn abelian(factors: &[usize]) -> Self {
        let name = if factors.is_empty() {
            "1".to_string()
        } else {
            factors.iter().map(|d| format!("Z{d}")).collect::<Vec<_>>().join("x")
        };
        let order: usize = factors.iter().product();
        let radix = MixedRadix::new(factors.iter().map(|&d| d as u64).collect());
        Self::from_fn(name, order, |a, b| {
            let va = radix.decode(a);
            let vb = radix.decode(b);
            let s: Vec<u64> = va.iter().zip(&vb).zip(&radix.radices).map(|((x, y), d)| (x + y) % d).collect();
            radix.encode(&s)
        })
        .expect("abelian group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted multiset of element orders.
    pub fn order_statistics(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order).map(|x| self.element_order(x)).collect();
        v.sort_unstable();
        v
    }

    /// Hex digest of the multiplication table; used as a cache key.
    pub fn table_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update((self.order as u64).to_le_bytes());
        for &v in &self.table {
            h.update((v as u32).to_le_bytes());
        }
        hex::encode(&h.finalize()[..16])
    }

    /// Smallest subgroup containing `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// Greedy generating set: scan elements in index order and keep those not
    /// already in the span of the previous ones.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for x in 1..self.order {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// All subgroups, each as a sorted element list, sorted by (order, elements).
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let cyclic: BTreeSet<Vec<usize>> = (0..self.order).map(|x| self.closure(&[x])).collect();
        found.extend(cyclic.iter().cloned());
        let mut frontier: Vec<Vec<usize>> = found.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                for c in &cyclic {
                    if c.iter().all(|x| s.binary_search(x).is_ok()) {
                        continue;
                    }
                    let mut gens = s.clone();
                    gens.extend(c.iter().copied());
                    let joined = self.closure(&gens);
                    if found.insert(joined.clone()) {
                        next.push(joined);
                    }
                }
            }
            frontier = next;
        }
        let mut all: Vec<Vec<usize>> = found.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        (0..self.order).all(|g| sub.iter().all(|&x| sub.binary_search(&self.conj(g, x)).is_ok()))
    }

    pub fn is_abelian_subset(&self, sub: &[usize]) -> bool {
        sub.iter().all(|&a| sub.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroups up to conjugacy: one representative (the least) per class.
    pub fn subgroup_classes(&self) -> Vec<Vec<usize>> {
        let all = self.subgroups();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut reps = Vec::new();
        for s in all {
            if seen.contains(&s) {
                continue;
            }
            for g in 0..self.order {
                let mut c: Vec<usize> = s.iter().map(|&x| self.conj(g, x)).collect();
                c.sort_unstable();
                seen.insert(c);
            }
            reps.push(s);
        }
        reps
    }

    /// The subgroup `sub` as a group in its own right (elements re-indexed in
    /// increasing order) together with the inclusion map.
    pub fn subgroup(&self, sub: &[usize]) -> (FiniteGroup, GroupMap) {
        let mut elems = sub.to_vec();
        elems.sort_unstable();
        let pos = |x: usize| elems.binary_search(&x).expect("subgroup closed under product");
        let g = FiniteGroup::from_fn(format!("{}<{}>", self.name, elems.len()), elems.len(), |a, b| {
            pos(self.mul(elems[a], elems[b]))
        })
        .expect("subgroup is a group");
        let map = GroupMap { images: elems.clone() };
        (g, map)
    }
}

/// Mixed-radix encoding of coordinate vectors; first coordinate most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedRadix {
    pub radices: Vec<u64>,
}

impl MixedRadix {
    pub fn new(radices: Vec<u64>) -> Self {
        MixedRadix { radices }
    }

    pub fn size(&self) -> usize {
        self.radices.iter().product::<u64>() as usize
    }

    pub fn encode(&self, v: &[u64]) -> usize {
        let mut idx = 0u64;
        for (x, d) in v.iter().zip(&self.radices) {
            idx = idx * d + (x % d);
        }
        idx as usize
    }

    pub fn decode(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.radices.len()];
        for (slot, &d) in out.iter_mut().zip(&self.radices).rev() {
            *slot = idx as u64 % d;
            idx /= d as usize;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.size()).map(move |i| self.decode(i))
    }
}

/// A map between groups given by the images of all source elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupMap {
    pub images: Vec<usize>,
}

impl GroupMap {
    pub fn identity(order: usize) -> Self {
        GroupMap { images: (0..order).collect() }
    }

    pub fn checked(source: &FiniteGroup, target: &FiniteGroup, images: Vec<usize>) -> Result<Self, GroupError> {
        let m = GroupMap { images };
        if m.images.len() != source.order() || m.images.iter().any(|&y| y >= target.order()) {
            return Err(GroupError::Parse("image list has wrong length or range".into()));
        }
        for x in 0..source.order() {
            for y in 0..source.order() {
                if m.images[source.mul(x, y)] != target.mul(m.images[x], m.images[y]) {
                    return Err(GroupError::NotHomomorphism(x, y));
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `self ∘ inner` (apply `inner` first).
    pub fn compose(&self, inner: &GroupMap) -> GroupMap {
        GroupMap { images: inner.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        for &y in &self.images {
            if y >= seen.len() || seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }

    pub fn inverse(&self) -> Option<GroupMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        Some(GroupMap { images: inv })
    }

    pub fn is_homomorphism(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        (0..source.order()).all(|x| {
            (0..source.order()).all(|y| self.images[source.mul(x, y)] == target.mul(self.images[x], self.images[y]))
        })
    }
}

/// Extends generator images to a full map by walking the Cayley graph.
/// Returns `None` if the assignment is inconsistent.
fn extend_from_generators(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    imgs: &[usize],
) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.order()];
    map[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let img = h.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = img;
                queue.push_back(y);
            } else if map[y] != img {
                return None;
            }
        }
    }
    Some(map)
}

/// Backtracking over generator images (ascending), pruned by element order.
/// `visit` returns `false` to stop the search early.
fn search_isomorphisms(g: &FiniteGroup, h: &FiniteGroup, mut visit: impl FnMut(GroupMap) -> bool) {
    if g.order() != h.order() || g.order_statistics() != h.order_statistics() {
        return;
    }
    let gens = g.generators();
    let orders_h: Vec<usize> = (0..h.order()).map(|x| h.element_order(x)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = g.element_order(s);
            (0..h.order()).filter(|&y| orders_h[y] == o).collect()
        })
        .collect();
    let mut imgs = vec![0usize; gens.len()];
    fn rec(
        depth: usize,
        g: &FiniteGroup,
        h: &FiniteGroup,
        gens: &[usize],
        cands: &[Vec<usize>],
        imgs: &mut Vec<usize>,
        visit: &mut dyn FnMut(GroupMap) -> bool,
    ) -> bool {
        if depth == gens.len() {
            if let Some(map) = extend_from_generators(g, h, gens, imgs) {
                let m = GroupMap { images: map };
                if m.is_bijective() {
                    return visit(m);
                }
            }
            return true;
        }
        for &c in &cands[depth] {
            // the partial assignment must already be consistent on the subgroup it generates
            imgs[depth] = c;
            if extend_from_generators(g, h, &gens[..=depth], &imgs[..=depth]).is_none() {
                continue;
            }
            if !rec(depth + 1, g, h, gens, cands, imgs, visit) {
                return false;
            }
        }
        true
    }
    rec(0, g, h, &gens, &candidates, &mut imgs, &mut visit);
}

/// Complete list of automorphisms, in generator-image search order.
pub fn automorphisms(g: &FiniteGroup) -> Vec<GroupMap> {
    let mut out = Vec::new();
    search_isomorphisms(g, g, |m| {
        out.push(m);
        true
    });
    out
}

pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<GroupMap> {
    let mut found = None;
    search_isomorphisms(g, h, |m| {
        found = Some(m);
        false
    });
    found
}

/// All isomorphisms `g -> h` (used to check choice-independence).
pub fn all_isomorphisms(g: &FiniteGroup, h: &FiniteGroup) -> Vec<GroupMap> {
    let mut out = Vec::new();
    search_isomorphisms(g, h, |m| {
        out.push(m);
        true
    });
    out
}

pub fn inner_automorphism(g: &FiniteGroup, x: usize) -> GroupMap {
    GroupMap { images: (0..g.order()).map(|y| g.conj(x, y)).collect() }
}

/// Identifiers of the five groups of order 8, in catalog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Order8 {
    Z2Cubed,
    Z4xZ2,
    Z8,
    D8,
    Q8,
}

impl Order8 {
    pub const ALL: [Order8; 5] = [Order8::Z2Cubed, Order8::Z4xZ2, Order8::Z8, Order8::D8, Order8::Q8];

    pub fn name(self) -> &'static str {
        match self {
            Order8::Z2Cubed => "Z2^3",
            Order8::Z4xZ2 => "Z4xZ2",
            Order8::Z8 => "Z8",
            Order8::D8 => "D8",
            Order8::Q8 => "Q8",
        }
    }

    pub fn index(self) -> usize {
        Order8::ALL.iter().position(|&g| g == self).unwrap()
    }

    pub fn from_name(s: &str) -> Option<Order8> {
        let norm: String = s.chars().filter(|c| !matches!(c, ' ' | '/' | '(' | ')' | '_')).collect::<String>().to_lowercase();
        match norm.as_str() {
            "z2^3" | "z23" | "z2xz2xz2" | "c2^3" | "elementary" => Some(Order8::Z2Cubed),
            "z4xz2" | "z4z2" | "c4xc2" => Some(Order8::Z4xZ2),
            "z8" | "c8" => Some(Order8::Z8),
            "d8" | "d4" | "dihedral" => Some(Order8::D8),
            "q8" | "quaternion" => Some(Order8::Q8),
            _ => None,
        }
    }

    pub fn group(self) -> FiniteGroup {
        match self {
            Order8::Z2Cubed => FiniteGroup::abelian(&[2, 2, 2]),
            Order8::Z4xZ2 => FiniteGroup::abelian(&[4, 2]),
            Order8::Z8 => FiniteGroup::cyclic(8),
            Order8::D8 => dihedral8(),
            Order8::Q8 => quaternion8(),
        }
        .with_name(self.name())
    }
}

/// D8 = <a, b | a^4 = b^2 = 1, bab = a^-1>, elements 1,a,a²,a³,b,ba,ba²,ba³.
fn dihedral8() -> FiniteGroup {
    // index i < 4 is a^i, index 4 + r is b a^r
    let split = |x: usize| (x / 4, x % 4);
    FiniteGroup::from_fn("D8", 8, |x, y| {
        let (s, r) = split(x);
        let (t, q) = split(y);
        // b^s a^r b^t a^q = b^(s+t) a^((-1)^t r + q)
        let r2 = if t == 1 { (4 - r) % 4 } else { r };
        ((s + t) % 2) * 4 + (r2 + q) % 4
    })
    .expect("D8")
}

/// Q8 with elements 1,−1,i,−i,j,−j,k,−k.
fn quaternion8() -> FiniteGroup {
    // unit u ∈ {1,i,j,k} = 0..4, index = 2u + sign
    const UNIT_MUL: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    FiniteGroup::from_fn("Q8", 8, |x, y| {
        let (u, s) = (x / 2, x % 2);
        let (v, t) = (y / 2, y % 2);
        let (w, sw) = UNIT_MUL[u][v];
        2 * w + (s + t + sw) % 2
    })
    .expect("Q8")
}

/// The five groups of order 8 in catalog order.
pub fn catalog_order8() -> Vec<FiniteGroup> {
    Order8::ALL.iter().map(|g| g.group()).collect()
}
