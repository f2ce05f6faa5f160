//! The twisted Drinfeld double `D^η(H)` as an algebra.
//!
//! Basis `δ_g ⊗ x` for `g, x ∈ H`, product
//! `(δ_g x)(δ_h y) = [g = x h x⁻¹] · θ_g(x, y) · δ_g xy` with
//! `θ_g(x,y) = η(g,x,y) + η(x,y,(xy)⁻¹g(xy)) − η(x, x⁻¹gx, y)` in additive
//! torus notation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{Coefficients, Cochain};
use crate::groups::FiniteGroup;
use crate::linalg::mask;
use crate::morita::MoritaPartition;
use crate::orbits::Census;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DoubleError {
    #[error("associator is not a torus 3-cocycle")]
    NotACocycle,
    #[error("associativity fails at g={g}, x={x}, y={y}, z={z}")]
    AssociativityFailure { g: usize, x: usize, y: usize, z: usize },
    #[error("commutativity differs inside Morita class {0}")]
    CensusInconsistent(usize),
}

/// Placement of the associator in `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// `θ` built from `η`.
    Standard,
    /// `θ` built from `−η` (inverse placement).
    Inverse,
}

#[derive(Debug, Clone)]
pub struct DoubleAlgebra {
    pub group: FiniteGroup,
    pub exp: u32,
    /// `θ_g(x,y)` numerators over `2^exp`, at `(g·n + x)·n + y`.
    pub theta: Vec<u64>,
}

/// A basis product: zero, or `coefficient · δ_g ⊗ x`.
pub type Product = Option<(u64, usize, usize)>;

impl DoubleAlgebra {
    #[inline]
    pub fn theta(&self, g: usize, x: usize, y: usize) -> u64 {
        let n = self.group.order();
        self.theta[(g * n + x) * n + y]
    }

    /// `(δ_g x)(δ_h y)`.
    pub fn mul(&self, (g, x): (usize, usize), (h, y): (usize, usize)) -> Product {
        let grp = &self.group;
        (g == grp.conj(x, h)).then(|| (self.theta(g, x, y), g, grp.mul(x, y)))
    }

    /// Exhaustive check of `θ_g(x,y) + θ_g(xy,z) = θ_{x⁻¹gx}(y,z) + θ_g(x,yz)`.
    pub fn check_associativity(&self) -> Result<(), DoubleError> {
        let grp = &self.group;
        let n = grp.order();
        let m = mask(self.exp);
        for g in 0..n {
            for x in 0..n {
                let h = grp.conj(grp.inv(x), g);
                for y in 0..n {
                    let xy = grp.mul(x, y);
                    for z in 0..n {
                        let lhs = (self.theta(g, x, y) + self.theta(g, xy, z)) & m;
                        let rhs = (self.theta(h, y, z) + self.theta(g, x, grp.mul(y, z))) & m;
                        if lhs != rhs {
                            return Err(DoubleError::AssociativityFailure { g, x, y, z });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `true` iff all basis elements commute.
    pub fn is_commutative(&self) -> bool {
        let n = self.group.order();
        (0..n * n).all(|a| {
            (a + 1..n * n).all(|b| {
                let (p, q) = ((a / n, a % n), (b / n, b % n));
                self.mul(p, q) == self.mul(q, p)
            })
        })
    }
}

/// Builds `D^η(H)` and verifies associativity exhaustively.
pub fn build_double(group: &FiniteGroup, eta: &Cochain, convention: Convention) -> Result<DoubleAlgebra, DoubleError> {
    let Coefficients::Torus { exp } = eta.coeffs else { return Err(DoubleError::NotACocycle) };
    if eta.degree != 3 || !eta.is_cocycle(group) {
        return Err(DoubleError::NotACocycle);
    }
    let eta = match convention {
        Convention::Standard => eta.clone(),
        Convention::Inverse => eta.neg(),
    };
    let n = group.order();
    let m = mask(exp);
    let e = |a: usize, b: usize, c: usize| eta.value(&[a, b, c]) as u64;
    let mut theta = vec![0u64; n * n * n];
    for g in 0..n {
        for x in 0..n {
            let xinv = group.inv(x);
            for y in 0..n {
                let xy = group.mul(x, y);
                let g_xy = group.conj(group.inv(xy), g);
                let g_x = group.conj(xinv, g);
                theta[(g * n + x) * n + y] = (e(g, x, y) + e(x, y, g_xy)).wrapping_sub(e(x, g_x, y)) & m;
            }
        }
    }
    let d = DoubleAlgebra { group: group.clone(), exp, theta };
    d.check_associativity()?;
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleCensus {
    pub commutative: Vec<usize>,
    pub noncommutative: Vec<usize>,
}

/// Commutativity of `D^η(H)` for every tensor class.
pub fn commutativity_by_tensor_class(census: &Census, convention: Convention) -> Result<Vec<bool>, DoubleError> {
    census
        .classes
        .par_iter()
        .map(|c| {
            let t = census.table(c.group);
            let eta = t.h3.representative(&c.canonical);
            Ok(build_double(&t.group, &eta, convention)?.is_commutative())
        })
        .collect()
}

/// Commutativity census over Morita classes, asserting that the verdict is
/// constant on each class (under both conventions).
pub fn double_census(census: &Census, partition: &MoritaPartition) -> Result<DoubleCensus, DoubleError> {
    let standard = commutativity_by_tensor_class(census, Convention::Standard)?;
    let inverse = commutativity_by_tensor_class(census, Convention::Inverse)?;
    let mut out = DoubleCensus { commutative: vec![], noncommutative: vec![] };
    for class in &partition.classes {
        let v = standard[class.members[0]];
        if class.members.iter().any(|&m| standard[m] != v || inverse[m] != v) {
            return Err(DoubleError::CensusInconsistent(class.id));
        }
        if v {
            out.commutative.push(class.id);
        } else {
            out.noncommutative.push(class.id);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::torus_h3;
    use crate::groups::Order8;

    #[test]
    fn untwisted_doubles() {
        for g in Order8::ALL {
            let grp = g.group();
            let zero = Cochain::zeros(8, 3, Coefficients::torus());
            let d = build_double(&grp, &zero, Convention::Standard).unwrap();
            assert_eq!(d.is_commutative(), grp.is_abelian(), "{}", g.name());
        }
    }

    #[test]
    fn twisted_doubles_are_associative() {
        for g in Order8::ALL {
            let grp = g.group();
            let h = torus_h3(&grp).unwrap();
            for i in 0..h.order() as usize {
                let eta = h.representative(&h.radix().decode(i));
                build_double(&grp, &eta, Convention::Standard).unwrap();
            }
        }
    }

    #[test]
    fn rejects_non_cocycles() {
        let grp = Order8::Z8.group();
        let mut bad = Cochain::zeros(8, 3, Coefficients::torus());
        bad.values[5] = 1;
        assert_eq!(build_double(&grp, &bad, Convention::Standard).unwrap_err(), DoubleError::NotACocycle);
    }
}
