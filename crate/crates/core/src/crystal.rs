//! Finite Cayley sum graphs from lattice data in any dimension.
//!
//! Take a lattice `U`, a point `A` with `2A` in a nontrivial coset of `U`,
//! and a bipartite "crystal" joining points of `U` to points of `2A + U`.
//! Folding by the half-turn `x ↦ 2A − x` and reducing modulo a sublattice
//! `L` gives `CayS(U / L, S)` where `S` collects `2A − n` over the crystal
//! neighbours `n` of the origin.
//!
//! `U` is always stored as `Z^d` through a fixed basis; the ambient
//! half-integer geometry is resolved when a family is instantiated, so a
//! [`CrystalSpec`] only holds integer data.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::{quotient_group, QuotientMap};
use crate::caysum::{cayley_sum_graph, CaySumGraph, SumSet};
use crate::error::{Error, Result};
use crate::fullerene::TriangleSpec;
use crate::intlinalg::{self, IntMatrix};
use crate::spectra::character_spectrum;

pub const MAX_DIMENSION: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalSpec {
    dim: usize,
    lifted_sum_set: Vec<Vec<i64>>,
    sublattice: IntMatrix,
}

impl CrystalSpec {
    pub fn new(lifted_sum_set: Vec<Vec<i64>>, sublattice: IntMatrix) -> Result<Self> {
        let dim = sublattice.dim();
        if dim > MAX_DIMENSION {
            return Err(Error::InvalidParameter(format!("dimension {dim} exceeds {MAX_DIMENSION}")));
        }
        if lifted_sum_set.is_empty() {
            return Err(Error::InvalidParameter("empty lifted sum set".into()));
        }
        if let Some(v) = lifted_sum_set.iter().find(|v| v.len() != dim) {
            return Err(Error::InvalidParameter(format!("lifted vector {v:?} is not {dim}-dimensional")));
        }
        if intlinalg::det(&sublattice)? == 0 {
            return Err(Error::DegenerateLattice);
        }
        Ok(CrystalSpec { dim, lifted_sum_set, sublattice })
    }

    /// The fullerene of a triangle spec, seen as a two-dimensional crystal.
    pub fn from_triangle(spec: &TriangleSpec) -> Result<Self> {
        let lifted = spec.lifted_sum_set().iter().map(|v| v.to_vec()).collect();
        CrystalSpec::new(lifted, spec.lattice())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lifted_sum_set(&self) -> &[Vec<i64>] {
        &self.lifted_sum_set
    }

    pub fn sublattice(&self) -> &IntMatrix {
        &self.sublattice
    }
}

pub fn crystal_cayley(spec: &CrystalSpec) -> Result<(QuotientMap, SumSet, CaySumGraph)> {
    let quotient = quotient_group(&spec.sublattice)?;
    let elements = spec.lifted_sum_set.iter().map(|v| quotient.project(v)).collect::<Result<Vec<_>>>()?;
    let sum_set = SumSet::new(quotient.target().clone(), elements)?;
    let graph = cayley_sum_graph(quotient.target(), &sum_set)?;
    Ok((quotient, sum_set, graph))
}

/// Canonical unmatched multiset of the crystal's graph.
pub fn unmatched_multiset(spec: &CrystalSpec) -> Result<Vec<i64>> {
    let (_, _, graph) = crystal_cayley(spec)?;
    Ok(character_spectrum(&graph).m_canonical)
}

/// Basis of `D_d` (even coordinate sum) as matrix columns:
/// `(1, 1, 0, …)` followed by `e_{k−1} − e_k`. For `d = 1` it is `(2)`.
pub fn d_lattice_basis(d: usize) -> IntMatrix {
    if d == 1 {
        return IntMatrix::diagonal(&[2]);
    }
    let mut b = IntMatrix::zeros(d);
    b.set(0, 0, 1);
    b.set(1, 0, 1);
    for k in 1..d {
        b.set(k - 1, k, 1);
        b.set(k, k, -1);
    }
    b
}

/// Coordinates of even-weight ambient vectors in the `D_d` basis.
fn to_d_basis(d: usize, ambient: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let basis = d_lattice_basis(d);
    ambient.iter().map(|v| intlinalg::solve_integer(&basis, v).map_err(Error::from)).collect()
}

fn unit(d: usize, k: usize) -> Vec<i64> {
    let mut e = vec![0; d];
    e[k] = 1;
    e
}

fn check_dim(d: usize, min: usize, sublattice: &IntMatrix) -> Result<()> {
    if d < min || d > MAX_DIMENSION {
        return Err(Error::InvalidParameter(format!("dimension {d} outside {min}..={MAX_DIMENSION}")));
    }
    if sublattice.dim() != d {
        return Err(Error::InvalidParameter(format!("sublattice is {0}x{0}, expected {d}x{d}", sublattice.dim())));
    }
    Ok(())
}

/// Two-way infinite path folded at an edge midpoint and wrapped with period
/// `n`: a path on `n` vertices with a semiedge at each end.
pub fn path_family(n: i64) -> Result<CrystalSpec> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("path length {n} < 2")));
    }
    // U = 2Z, 2A = 1, neighbours ±1 of the origin: 2A − n ∈ {0, 2}
    let lifted = to_d_basis(1, &[vec![0], vec![2]])?;
    CrystalSpec::new(lifted, IntMatrix::diagonal(&[n]))
}

/// Where the half-turn centre sits in the cubic grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridAnchor {
    /// `A = (1/2, 0, …, 0)`, an edge midpoint.
    EdgeMidpoint,
    /// `A = (1/2, …, 1/2)`, a cell centre; odd `d` only.
    CellCenter,
}

/// Cubic grid `Z^d` with `U = D_d`; `2d`-regular.
pub fn grid_family(d: usize, sublattice: IntMatrix, anchor: GridAnchor) -> Result<CrystalSpec> {
    check_dim(d, 1, &sublattice)?;
    let two_a = match anchor {
        GridAnchor::EdgeMidpoint => unit(d, 0),
        GridAnchor::CellCenter if d % 2 == 1 => vec![1; d],
        GridAnchor::CellCenter => {
            return Err(Error::InvalidParameter("cell-centre anchor needs odd dimension".into()));
        }
    };
    let mut ambient = Vec::with_capacity(2 * d);
    for k in 0..d {
        for sign in [1, -1] {
            let mut v = two_a.clone();
            v[k] -= sign;
            ambient.push(v);
        }
    }
    CrystalSpec::new(to_d_basis(d, &ambient)?, sublattice)
}

/// Half-turn centre for the diamond crystal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiamondAnchor {
    /// `A = (1/4, …, 1/4)`
    Corner,
    /// `A = (5/4, 1/4, …, 1/4)`, which lies on no crystal edge.
    Offset,
}

/// Generalised diamond packing `D_d ∪ (D_d + (1/2, …, 1/2))`, each point of
/// `D_d` joined to its `2^{d−1}` nearest points of the other coset.
pub fn diamond_family(d: usize, sublattice: IntMatrix, anchor: DiamondAnchor) -> Result<CrystalSpec> {
    check_dim(d, 2, &sublattice)?;
    // With h = (1/2, …, 1/2) the neighbours are h − f for 0/1 vectors f of
    // even weight, and 2A = h (+ 2e_1 for the offset anchor), so 2A − n = f
    // (+ 2e_1).
    let shift = match anchor {
        DiamondAnchor::Corner => 0,
        DiamondAnchor::Offset => 2,
    };
    let ambient: Vec<Vec<i64>> = (0u32..1 << d)
        .filter(|mask| mask.count_ones() % 2 == 0)
        .map(|mask| {
            let mut f: Vec<i64> = (0..d).map(|k| ((mask >> k) & 1) as i64).collect();
            f[0] += shift;
            f
        })
        .collect();
    CrystalSpec::new(to_d_basis(d, &ambient)?, sublattice)
}

/// Family selector used by the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrystalFamily {
    Path,
    Grid(GridAnchor),
    Diamond(DiamondAnchor),
}

impl CrystalFamily {
    pub fn build(self, d: usize, sublattice: IntMatrix) -> Result<CrystalSpec> {
        match self {
            CrystalFamily::Path => {
                if d != 1 || sublattice.dim() != 1 {
                    return Err(Error::InvalidParameter("the path family is one-dimensional".into()));
                }
                path_family(sublattice.get(0, 0).abs())
            }
            CrystalFamily::Grid(anchor) => grid_family(d, sublattice, anchor),
            CrystalFamily::Diamond(anchor) => diamond_family(d, sublattice, anchor),
        }
    }
}

/// True if every column of `sublattice` lies in `2U` (all coordinates even).
pub fn inside_double(sublattice: &IntMatrix) -> bool {
    sublattice.rows().iter().flatten().all(|x| x % 2 == 0)
}

/// Random upper Hermite-form matrix of dimension `d` and index at most
/// `max_index`.
pub fn random_sublattice<R: Rng + ?Sized>(rng: &mut R, d: usize, max_index: i64) -> IntMatrix {
    let mut h = IntMatrix::zeros(d);
    let mut budget = max_index.max(1);
    for i in 0..d {
        let diag = rng.gen_range(1..=budget);
        budget /= diag;
        h.set(i, i, diag);
    }
    for i in 0..d {
        for j in i + 1..d {
            let bound = h.get(i, i);
            h.set(i, j, rng.gen_range(0..bound));
        }
    }
    h
}
