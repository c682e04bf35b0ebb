//! Cayley sum graphs `CayS(Γ, S)` (u ~ v iff u + v ∈ S) and ordinary Cayley
//! graphs over finite abelian groups.
//!
//! Vertices are indexed by the lexicographic enumeration of the group. A
//! vertex `u` with `2u ∈ S` carries a semiedge, which adds one to its degree
//! and one to the diagonal of the adjacency matrix. Loops are never created.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::abelian::{FiniteAbelianGroup, GroupElement};
use crate::error::{Error, Result};

/// Multiset of group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumSet {
    group: FiniteAbelianGroup,
    elements: Vec<GroupElement>,
}

impl SumSet {
    pub fn new(group: FiniteAbelianGroup, elements: Vec<GroupElement>) -> Result<Self> {
        for e in &elements {
            group.ensure_contains(e)?;
        }
        Ok(SumSet { group, elements })
    }

    /// Builds the multiset from raw coordinates, reducing each into the group.
    pub fn from_coords<C: AsRef<[i64]>>(group: FiniteAbelianGroup, coords: &[C]) -> Result<Self> {
        let elements = coords.iter().map(|c| group.element(c.as_ref())).collect::<Result<_>>()?;
        Ok(SumSet { group, elements })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn multiplicity(&self, x: &GroupElement) -> usize {
        self.elements.iter().filter(|e| *e == x).count()
    }

    /// Elements in sorted order; equal multisets give equal vectors.
    pub fn sorted(&self) -> Vec<GroupElement> {
        let mut v = self.elements.clone();
        v.sort();
        v
    }
}

/// `S - S = {s1 - s2}` as a multiset of size `|S|²`.
pub fn sum_set_difference(s: &SumSet) -> Vec<GroupElement> {
    let g = s.group();
    s.elements.iter().flat_map(|a| s.elements.iter().map(move |b| g.sub(a, b))).collect()
}

/// `S + 2t`; translation by `t` is an isomorphism `CayS(Γ,S) -> CayS(Γ,S+2t)`.
pub fn translate_sum_set(s: &SumSet, t: &GroupElement) -> Result<SumSet> {
    let g = s.group();
    g.ensure_contains(t)?;
    let two_t = g.double(t);
    Ok(SumSet { group: g.clone(), elements: s.elements.iter().map(|e| g.add(e, &two_t)).collect() })
}

/// Dense symmetric adjacency matrix with nonnegative integer entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    order: usize,
    entries: Vec<u32>,
}

impl AdjacencyMatrix {
    pub fn zeros(order: usize) -> Self {
        AdjacencyMatrix { order, entries: vec![0; order * order] }
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let order = rows.len();
        let mut m = Self::zeros(order);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidParameter(format!("row {r} has {} entries, expected {order}", row.len())));
            }
            m.entries[r * order..(r + 1) * order].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.order + c]
    }

    fn bump(&mut self, r: usize, c: usize, by: u32) {
        self.entries[r * self.order + c] += by;
    }

    pub fn trace(&self) -> u64 {
        (0..self.order).map(|i| self.get(i, i) as u64).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    pub(crate) fn first_asymmetry(&self) -> Option<(usize, usize)> {
        (0..self.order).flat_map(|r| (r + 1..self.order).map(move |c| (r, c))).find(|&(r, c)| self.get(r, c) != self.get(c, r))
    }

    pub fn square(&self) -> AdjacencyMatrix {
        let n = self.order;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    out.entries[r * n + c] += a * self.get(k, c);
                }
            }
        }
        out
    }

    pub fn sum_of_squares(&self) -> u64 {
        self.entries.iter().map(|&x| x as u64 * x as u64).sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|&x| x as f64).collect()
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.order.max(1)).take(self.order).map(<[u32]>::to_vec).collect()
    }

    /// `y = A·x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.order)
            .map(|r| self.entries[r * self.order..(r + 1) * self.order].iter().zip(x).map(|(&a, &v)| a as f64 * v).sum())
            .collect()
    }
}

/// `CayS(Γ, S)` with edge multiplicities and per-vertex semiedge counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaySumGraph {
    sum_set: SumSet,
    edges: BTreeMap<(usize, usize), u32>,
    semiedges: Vec<u32>,
}

impl CaySumGraph {
    pub fn group(&self) -> &FiniteAbelianGroup {
        self.sum_set.group()
    }

    pub fn sum_set(&self) -> &SumSet {
        &self.sum_set
    }

    pub fn vertex_count(&self) -> usize {
        self.semiedges.len()
    }

    pub fn regularity(&self) -> usize {
        self.sum_set.len()
    }

    /// Edge multiplicities keyed by vertex index pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> &BTreeMap<(usize, usize), u32> {
        &self.edges
    }

    pub fn edge_multiplicity(&self, u: usize, v: usize) -> u32 {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.get(&key).copied().unwrap_or(0)
    }

    pub fn semiedge_counts(&self) -> &[u32] {
        &self.semiedges
    }

    pub fn semiedge_total(&self) -> u32 {
        self.semiedges.iter().sum()
    }

    /// Vertices carrying at least one semiedge.
    pub fn semiedge_vertices(&self) -> Vec<GroupElement> {
        let g = self.group();
        self.semiedges.iter().enumerate().filter(|&(_, &c)| c > 0).map(|(i, _)| g.element_at(i)).collect()
    }

    pub fn degree(&self, u: usize) -> u32 {
        let incident: u32 = self.edges.iter().filter(|(&(a, b), _)| a == u || b == u).map(|(_, &m)| m).sum();
        incident + self.semiedges[u]
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = self.semiedges.clone();
        for (&(a, b), &m) in &self.edges {
            deg[a] += m;
            deg[b] += m;
        }
        deg
    }

    pub fn adjacency(&self) -> AdjacencyMatrix {
        let mut a = AdjacencyMatrix::zeros(self.vertex_count());
        for (&(u, v), &m) in &self.edges {
            a.bump(u, v, m);
            a.bump(v, u, m);
        }
        for (u, &s) in self.semiedges.iter().enumerate() {
            a.bump(u, u, s);
        }
        a
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            moduli: self.group().moduli().to_vec(),
            sum_set: self.sum_set.elements.iter().map(|e| e.coords().to_vec()).collect(),
            semiedges: self.semiedges.iter().enumerate().filter(|&(_, &c)| c > 0).map(|(i, &c)| (i, c)).collect(),
            edges: self.edges.iter().map(|(&(u, v), &m)| [u, v, m as usize]).collect(),
        }
    }
}

pub fn cayley_sum_graph(group: &FiniteAbelianGroup, sum_set: &SumSet) -> Result<CaySumGraph> {
    if sum_set.group() != group {
        return Err(Error::GroupMismatch(format!("sum set lives in {:?}, not {:?}", sum_set.group(), group)));
    }
    let n = group.order();
    let mut edges = BTreeMap::new();
    let mut semiedges = vec![0u32; n];
    for (u_idx, u) in group.elements().enumerate() {
        for s in sum_set.elements() {
            let v = group.sub(s, &u);
            let v_idx = group.index_of(&v);
            if v_idx == u_idx {
                semiedges[u_idx] += 1;
            } else if u_idx < v_idx {
                *edges.entry((u_idx, v_idx)).or_insert(0) += 1;
            }
        }
    }
    Ok(CaySumGraph { sum_set: sum_set.clone(), edges, semiedges })
}

/// Adjacency matrix of `Cay(Γ, D)`: `A[u][v]` is the multiplicity of
/// `u - v` in `D`. `D` must be closed under negation as a multiset.
pub fn cayley_graph(group: &FiniteAbelianGroup, connection: &[GroupElement]) -> Result<AdjacencyMatrix> {
    let mut counts: HashMap<&GroupElement, u32> = HashMap::new();
    for d in connection {
        group.ensure_contains(d)?;
        *counts.entry(d).or_insert(0) += 1;
    }
    for (d, &c) in &counts {
        if counts.get(&group.neg(d)).copied().unwrap_or(0) != c {
            return Err(Error::NonSymmetricMultiset);
        }
    }
    let n = group.order();
    let mut a = AdjacencyMatrix::zeros(n);
    for (u_idx, u) in group.elements().enumerate() {
        for (d, &c) in &counts {
            let v = group.sub(&u, d);
            a.bump(u_idx, group.index_of(&v), c);
        }
    }
    Ok(a)
}

/// Wire format for a Cayley sum graph. Vertex indices follow the
/// lexicographic enumeration of the group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub moduli: Vec<i64>,
    pub sum_set: Vec<Vec<i64>>,
    #[serde(default)]
    pub semiedges: BTreeMap<usize, u32>,
    #[serde(default)]
    pub edges: Vec<[usize; 3]>,
}

impl GraphJson {
    /// Rebuilds the graph from `moduli` and `sum_set`, and checks that the
    /// listed edges and semiedges agree with it.
    pub fn to_graph(&self) -> Result<CaySumGraph> {
        let group = FiniteAbelianGroup::new(self.moduli.iter().copied())?;
        let sum_set = SumSet::from_coords(group.clone(), &self.sum_set)?;
        let graph = cayley_sum_graph(&group, &sum_set)?;
        let listed = self.edges.iter().map(|&[u, v, m]| ((u.min(v), u.max(v)), m as u32)).collect::<BTreeMap<_, _>>();
        if listed != graph.edges {
            return Err(Error::InvariantViolation("edge list disagrees with the sum set".into()));
        }
        let semi: BTreeMap<usize, u32> = graph.to_json().semiedges;
        if semi != self.semiedges {
            return Err(Error::InvariantViolation("semiedge list disagrees with the sum set".into()));
        }
        Ok(graph)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(m: &[i64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(m.iter().copied()).unwrap()
    }

    fn k4() -> CaySumGraph {
        let g = group(&[2, 2]);
        let s = SumSet::from_coords(g.clone(), &[[1, 0], [0, 1], [1, 1]]).unwrap();
        cayley_sum_graph(&g, &s).unwrap()
    }

    #[test]
    fn theta_quotient() {
        let g = FiniteAbelianGroup::trivial();
        let s = SumSet::new(g.clone(), vec![g.zero(); 3]).unwrap();
        let graph = cayley_sum_graph(&g, &s).unwrap();
        assert_eq!(graph.vertex_count(), 1);
        assert_eq!(graph.semiedge_total(), 3);
        assert!(graph.edges().is_empty());
        assert_eq!(graph.adjacency().get(0, 0), 3);
    }

    #[test]
    fn k4_from_klein_group() {
        let graph = k4();
        assert_eq!(graph.vertex_count(), 4);
        assert_eq!(graph.semiedge_total(), 0);
        assert_eq!(graph.edges().len(), 6);
        assert!(graph.edges().values().all(|&m| m == 1));
        assert_eq!(graph.degrees(), vec![3; 4]);
    }

    #[test]
    fn semiedges_of_shifted_fullerene() {
        let g = group(&[2, 20]);
        let s = SumSet::from_coords(g.clone(), &[[0, 0], [1, 6], [1, 7]]).unwrap();
        let graph = cayley_sum_graph(&g, &s).unwrap();
        assert_eq!(graph.vertex_count(), 40);
        let semi: Vec<Vec<i64>> = graph.semiedge_vertices().iter().map(|e| e.coords().to_vec()).collect();
        assert_eq!(semi, vec![vec![0, 0], vec![0, 10], vec![1, 0], vec![1, 10]]);
        assert_eq!(graph.adjacency().trace(), 4);
        assert!(graph.degrees().iter().all(|&d| d == 3));
        assert_eq!(graph.degree(0), 3);
    }

    #[test]
    fn rejects_foreign_sum_set() {
        let s = SumSet::from_coords(group(&[3]), &[[1]]).unwrap();
        assert!(matches!(cayley_sum_graph(&group(&[4]), &s), Err(Error::GroupMismatch(_))));
        assert!(SumSet::new(group(&[3]), vec![group(&[5]).element(&[4]).unwrap()]).is_err());
    }

    #[test]
    fn cycle_as_cayley_graph() {
        let g = group(&[4]);
        let d = vec![g.element(&[1]).unwrap(), g.element(&[3]).unwrap()];
        let a = cayley_graph(&g, &d).unwrap();
        let expected = AdjacencyMatrix::from_rows(&[vec![0, 1, 0, 1], vec![1, 0, 1, 0], vec![0, 1, 0, 1], vec![1, 0, 1, 0]]).unwrap();
        assert_eq!(a, expected);
        assert_eq!(cayley_graph(&g, &[]).unwrap(), AdjacencyMatrix::zeros(4));
        assert!(matches!(cayley_graph(&g, &d[..1]), Err(Error::NonSymmetricMultiset)));
    }

    #[test]
    fn difference_multiset_of_k4() {
        let graph = k4();
        let diff = sum_set_difference(graph.sum_set());
        assert_eq!(diff.len(), 9);
        let g = graph.group();
        let count = |c: [i64; 2]| diff.iter().filter(|e| e.coords() == c).count();
        assert_eq!(count([0, 0]), 3);
        assert_eq!(count([1, 1]), 2);
        assert_eq!(count([0, 1]), 2);
        assert_eq!(count([1, 0]), 2);
        assert_eq!(cayley_graph(g, &diff).unwrap(), graph.adjacency().square());
    }

    #[test]
    fn difference_multiset_sizes() {
        let t = FiniteAbelianGroup::trivial();
        let s = SumSet::new(t.clone(), vec![t.zero(); 3]).unwrap();
        assert_eq!(sum_set_difference(&s), vec![t.zero(); 9]);

        let g = group(&[2, 20]);
        let s = SumSet::from_coords(g.clone(), &[[0, 1], [1, 7], [1, 8]]).unwrap();
        let diff = sum_set_difference(&s);
        assert_eq!(diff.len(), 9);
        assert_eq!(diff.iter().filter(|e| **e == g.zero()).count(), 3);
    }

    #[test]
    fn translations() {
        let g = group(&[2, 20]);
        let s = SumSet::from_coords(g.clone(), &[[0, 1], [1, 7], [1, 8]]).unwrap();
        assert_eq!(translate_sum_set(&s, &g.zero()).unwrap(), s);
        assert_eq!(translate_sum_set(&s, &g.element(&[1, 0]).unwrap()).unwrap(), s);

        let z5 = group(&[5]);
        let s = SumSet::from_coords(z5.clone(), &[[1]]).unwrap();
        let t = translate_sum_set(&s, &z5.element(&[1]).unwrap()).unwrap();
        assert_eq!(t.elements(), &[z5.element(&[3]).unwrap()]);
    }

    #[test]
    fn json_round_trip() {
        let g = group(&[2, 20]);
        let s = SumSet::from_coords(g.clone(), &[[0, 0], [1, 6], [1, 7]]).unwrap();
        let graph = cayley_sum_graph(&g, &s).unwrap();
        let json = serde_json::to_string(&graph.to_json()).unwrap();
        let back: GraphJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_graph().unwrap(), graph);

        let mut tampered = graph.to_json();
        tampered.edges.pop();
        assert!(tampered.to_graph().is_err());
    }
}
