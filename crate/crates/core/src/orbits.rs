//! The action of `Aut(H)` on `H^3(H, C*)` and its orbits — the classification
//! of pointed fusion categories `Vect(H, η)` up to tensor equivalence.

use std::collections::VecDeque;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{pullback, restriction, torus_h3, CohomologyGroup, Result};
use crate::groups::{automorphisms, FiniteGroup, GroupMap, Order8};

/// Linear map on coordinate vectors, given by the images of the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateMap {
    pub factors: Vec<u64>,
    /// `columns[i]` = coordinates of the image of basis element `i`.
    pub columns: Vec<Vec<u64>>,
}

impl CoordinateMap {
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.factors.len()];
        for (xi, col) in x.iter().zip(&self.columns) {
            for ((o, &c), &d) in out.iter_mut().zip(col).zip(&self.factors) {
                *o = (*o + xi * c) % d;
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.columns.iter().enumerate().all(|(i, c)| c.iter().enumerate().all(|(j, &v)| v == (i == j) as u64))
    }
}

/// `coords(η) ↦ coords(φ*η)` for a single automorphism.
pub fn coordinate_map(group: &FiniteGroup, h3: &CohomologyGroup, phi: &GroupMap) -> Result<CoordinateMap> {
    let columns = h3
        .basis
        .iter()
        .map(|b| h3.class_coordinates(group, &pullback(phi, b)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoordinateMap { factors: h3.invariant_factors.clone(), columns })
}

/// Coordinate maps of every automorphism of `group`, in the order of
/// [`automorphisms`].
pub fn aut_action(group: &FiniteGroup, h3: &CohomologyGroup) -> Result<Vec<CoordinateMap>> {
    automorphisms(group).iter().map(|phi| coordinate_map(group, h3, phi)).collect()
}

/// Invariants of a class that are constant on its orbit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub class_order: u64,
    /// Sorted `(subgroup order, class order of the restriction)` over
    /// conjugacy classes of subgroups.
    pub restriction_signature: Vec<(usize, u64)>,
    pub orbit_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub id: usize,
    pub canonical: Vec<u64>,
    pub members: Vec<Vec<u64>>,
    pub class_order: u64,
    pub fingerprint: Fingerprint,
    pub label: String,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// The orbit partition of `H^3(H, C*)` under `Aut(H)`.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    pub group: FiniteGroup,
    pub h3: Arc<CohomologyGroup>,
    pub aut_order: usize,
    pub orbits: Vec<Orbit>,
    /// Orbit id of each coordinate vector (indexed by its mixed-radix code).
    pub orbit_of: Vec<usize>,
}

impl OrbitTable {
    pub fn orbit_of_coords(&self, coords: &[u64]) -> usize {
        self.orbit_of[self.h3.radix().encode(coords)]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Orbit::size).collect()
    }
}

/// Sorted restriction signature of a class.
pub fn restriction_signature(group: &FiniteGroup, h3: &CohomologyGroup, coords: &[u64]) -> Result<Vec<(usize, u64)>> {
    let eta = h3.representative(coords);
    let mut sig = Vec::new();
    for sub in group.subgroup_classes() {
        let (s, incl) = group.subgroup(&sub);
        let hs = torus_h3(&s)?;
        let c = hs.class_coordinates(&s, &restriction(&incl, &eta))?;
        sig.push((sub.len(), hs.class_order(&c)));
    }
    sig.sort_unstable();
    Ok(sig)
}

/// Report label where the correspondence with the classical names is forced.
fn label_for(group: &FiniteGroup, class_order: u64, size: usize) -> Option<&'static str> {
    if class_order == 1 {
        return Some("0");
    }
    match (Order8::from_name(group.name()), class_order, size) {
        (Some(Order8::Z8), 2, 1) => Some("4s^2"),
        (Some(Order8::Q8), 2, 1) => Some("4t"),
        _ => None,
    }
}

/// Orbits by breadth-first closure from each unvisited vector; canonical
/// representative = lexicographically least member.
pub fn orbit_table(group: &FiniteGroup) -> Result<OrbitTable> {
    let h3 = torus_h3(group)?;
    let maps = aut_action(group, &h3)?;
    let radix = h3.radix();
    let total = radix.size();
    let mut orbit_of = vec![usize::MAX; total];
    let mut raw: Vec<Vec<Vec<u64>>> = Vec::new();
    for start in 0..total {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = raw.len();
        orbit_of[start] = id;
        let mut members = vec![radix.decode(start)];
        let mut queue = VecDeque::from([radix.decode(start)]);
        while let Some(x) = queue.pop_front() {
            for m in &maps {
                let y = m.apply(&x);
                let code = radix.encode(&y);
                if orbit_of[code] == usize::MAX {
                    orbit_of[code] = id;
                    members.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        members.sort();
        raw.push(members);
    }
    // BFS from ascending codes visits orbits in order of their least member
    let orbits = raw
        .into_iter()
        .enumerate()
        .map(|(id, members)| {
            let canonical = members[0].clone();
            let class_order = h3.class_order(&canonical);
            let restriction_signature = restriction_signature(group, &h3, &canonical)?;
            let fingerprint = Fingerprint { class_order, restriction_signature, orbit_size: members.len() };
            let label = match label_for(group, class_order, members.len()) {
                Some(l) => l.to_string(),
                None => format!("ord{}/size{}#{}", class_order, members.len(), id),
            };
            Ok(Orbit { id, canonical, members, class_order, fingerprint, label })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrbitTable { group: group.clone(), h3, aut_order: maps.len(), orbits, orbit_of })
}

/// One tensor-equivalence class: a catalog group and an orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorClass {
    pub id: usize,
    pub group: Order8,
    pub orbit: usize,
    pub canonical: Vec<u64>,
    pub label: String,
}

/// Orbit tables of the five catalog groups plus a global numbering of all
/// tensor-equivalence classes (catalog order, then orbit id).
#[derive(Debug, Clone)]
pub struct Census {
    pub tables: Vec<OrbitTable>,
    pub classes: Vec<TensorClass>,
    /// First global id of each catalog group's classes.
    pub offsets: Vec<usize>,
}

impl Census {
    pub fn class_id(&self, group: Order8, orbit: usize) -> usize {
        self.offsets[group.index()] + orbit
    }

    pub fn table(&self, group: Order8) -> &OrbitTable {
        &self.tables[group.index()]
    }

    /// Global class of a cocycle given by its coordinates on a catalog group.
    pub fn class_of_coords(&self, group: Order8, coords: &[u64]) -> usize {
        self.class_id(group, self.table(group).orbit_of_coords(coords))
    }
}

pub fn equivalence_census() -> Result<Census> {
    let tables = Order8::ALL.par_iter().map(|g| orbit_table(&g.group())).collect::<Result<Vec<_>>>()?;
    let mut classes = Vec::new();
    let mut offsets = Vec::new();
    for (g, t) in Order8::ALL.iter().zip(&tables) {
        offsets.push(classes.len());
        for o in &t.orbits {
            classes.push(TensorClass { id: classes.len(), group: *g, orbit: o.id, canonical: o.canonical.clone(), label: o.label.clone() });
        }
    }
    Ok(Census { tables, classes, offsets })
}
