//! (0,3,6)-fullerenes from triangles on the triangular grid.
//!
//! A triangle `ABC` with `AB = p·a + q·b`, `AC = r·a + s·b` (in the unit
//! basis `a`, `b` of the grid, at 60°) and an optional half-step shift
//! `c = (p1/2)·a + (p2/2)·b` of `A` determines a cubic graph with triangular
//! and hexagonal faces, possibly with semiedges. Two routes build it:
//!
//! * [`group_and_sumset`]: the Smith form of `[[p, r], [q, s]]` gives the
//!   group `Γ = Z^2 / L` and the three-element sum set `S`, so the graph is
//!   `CayS(Γ, S)`;
//! * [`fold_construction`]: grid triangles are identified under translations
//!   by `L` and the half-turn about `A + c`, using Hermite-form reduction
//!   and no group theory at all.
//!
//! [`verify_isomorphism`] checks that the two agree under the labelling
//! `U(i, j) ↦ project(i, j)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{quotient_group, GroupElement, QuotientMap};
use crate::caysum::{cayley_sum_graph, CaySumGraph, SumSet};
use crate::error::{Error, Result};
use crate::intlinalg::{self, IntMatrix};
use crate::spectra::{self, character_spectrum, SpectrumPartition, MATCH_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriangleSpec {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub s: i64,
    pub p1: i64,
    pub p2: i64,
}

impl TriangleSpec {
    /// Shift parameters are reduced mod 2.
    pub fn new(p: i64, q: i64, r: i64, s: i64, p1: i64, p2: i64) -> Result<Self> {
        let spec = TriangleSpec { p, q, r, s, p1: p1.rem_euclid(2), p2: p2.rem_euclid(2) };
        if spec.determinant() == 0 {
            return Err(Error::DegenerateTriangle);
        }
        Ok(spec)
    }

    /// `ps − qr`, widened so it cannot overflow.
    pub fn determinant(&self) -> i128 {
        self.p as i128 * self.s as i128 - self.q as i128 * self.r as i128
    }

    pub fn vertex_count(&self) -> usize {
        self.determinant().unsigned_abs() as usize
    }

    /// Columns `AB` and `AC` in the `(a, b)` basis.
    pub fn lattice(&self) -> IntMatrix {
        IntMatrix::from_rows(&[[self.p, self.r], [self.q, self.s]]).expect("2x2")
    }

    /// Lifted sum set: the up-triangles at `-a`, `-b`, `-a-b` shifted by `2c`.
    pub fn lifted_sum_set(&self) -> [[i64; 2]; 3] {
        let (p1, p2) = (self.p1, self.p2);
        [[p1 - 1, p2], [p1, p2 - 1], [p1 - 1, p2 - 1]]
    }

    /// An equivalent spec whose triangle has no obtuse angle: same lattice and
    /// shift, hence the same graph, with a Gauss-reduced basis.
    pub fn non_obtuse(&self) -> TriangleSpec {
        // doubled inner product in the 60° basis
        let dot = |u: (i64, i64), v: (i64, i64)| 2 * u.0 * v.0 + 2 * u.1 * v.1 + u.0 * v.1 + u.1 * v.0;
        let mut u = (self.p, self.q);
        let mut v = (self.r, self.s);
        loop {
            if dot(u, u) > dot(v, v) {
                std::mem::swap(&mut u, &mut v);
            }
            // nearest integer to (u·v)/(u·u)
            let k = (2 * dot(u, v) + dot(u, u)).div_euclid(2 * dot(u, u));
            if k == 0 {
                break;
            }
            v = (v.0 - k * u.0, v.1 - k * u.1);
        }
        if dot(u, v) < 0 {
            v = (-v.0, -v.1);
        }
        TriangleSpec { p: u.0, q: u.1, r: v.0, s: v.1, p1: self.p1, p2: self.p2 }
    }
}

impl fmt::Display for TriangleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{},{}", self.p, self.q, self.r, self.s, self.p1, self.p2)
    }
}

impl FromStr for TriangleSpec {
    type Err = Error;

    /// Parses `p,q,r,s,p1,p2`.
    fn from_str(text: &str) -> Result<Self> {
        let nums = text
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|e| Error::InvalidParameter(format!("spec component {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        match nums[..] {
            [p, q, r, s, p1, p2] => TriangleSpec::new(p, q, r, s, p1, p2),
            _ => Err(Error::InvalidParameter(format!("spec needs 6 integers, got {}", nums.len()))),
        }
    }
}

/// `Γ = Z^2 / L` and `S` via the Smith form of the lattice.
pub fn group_and_sumset(spec: &TriangleSpec) -> Result<(QuotientMap, SumSet)> {
    let quotient = quotient_group(&spec.lattice())?;
    let sum_set = sum_set_for(spec, &quotient)?;
    Ok((quotient, sum_set))
}

/// Sum set of `spec` under a given quotient map (e.g. one built from a
/// different but valid Smith transform).
pub fn sum_set_for(spec: &TriangleSpec, quotient: &QuotientMap) -> Result<SumSet> {
    let elements = spec.lifted_sum_set().iter().map(|x| quotient.project(x)).collect::<Result<Vec<_>>>()?;
    SumSet::new(quotient.target().clone(), elements)
}

/// Reduction of `Z^2` modulo a sublattice through its upper Hermite form
/// `[[h00, h01], [0, h11]]`; representatives fill the box
/// `[0, h00) x [0, h11)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct BoxReduction {
    h00: i64,
    h01: i64,
    h11: i64,
}

impl BoxReduction {
    fn new(lattice: &IntMatrix) -> Result<Self> {
        let h = intlinalg::hermite_upper(lattice).map_err(|e| match e {
            crate::error::LinalgError::Singular => Error::DegenerateTriangle,
            other => other.into(),
        })?;
        Ok(BoxReduction { h00: h.get(0, 0), h01: h.get(0, 1), h11: h.get(1, 1) })
    }

    fn size(&self) -> usize {
        (self.h00 * self.h11) as usize
    }

    fn reduce(&self, i: i64, j: i64) -> (i64, i64) {
        let k = j.div_euclid(self.h11);
        ((i - k * self.h01).rem_euclid(self.h00), j - k * self.h11)
    }

    fn index(&self, i: i64, j: i64) -> usize {
        let (i, j) = self.reduce(i, j);
        (i * self.h11 + j) as usize
    }

    fn representative(&self, index: usize) -> (i64, i64) {
        let index = index as i64;
        (index / self.h11, index % self.h11)
    }
}

/// Dual graph of the folded triangle, built directly on grid triangles.
///
/// Up-triangle `U(i, j)` has corners `{0, a, b}` offset by `i·a + j·b`,
/// down-triangle `D(i, j)` has corners `{a, b, a + b}`. The half-turn about
/// `A + c` sends `U(i, j)` to `D(p1 − 1 − i, p2 − 1 − j)`, so each vertex
/// (orbit) contains exactly one up-triangle class mod `L`, used as its
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedGraph {
    spec: TriangleSpec,
    reps: Vec<(i64, i64)>,
    edges: BTreeMap<(usize, usize), u32>,
    semiedges: Vec<u32>,
}

impl FoldedGraph {
    pub fn spec(&self) -> &TriangleSpec {
        &self.spec
    }

    pub fn vertex_count(&self) -> usize {
        self.reps.len()
    }

    /// Grid coordinates of the up-triangle representing each vertex.
    pub fn representatives(&self) -> &[(i64, i64)] {
        &self.reps
    }

    pub fn edges(&self) -> &BTreeMap<(usize, usize), u32> {
        &self.edges
    }

    pub fn semiedge_counts(&self) -> &[u32] {
        &self.semiedges
    }

    pub fn semiedge_total(&self) -> u32 {
        self.semiedges.iter().sum()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = self.semiedges.clone();
        for (&(a, b), &m) in &self.edges {
            deg[a] += m;
            deg[b] += m;
        }
        deg
    }

    /// `f`-labels of the vertices under `quotient`.
    pub fn labels(&self, quotient: &QuotientMap) -> Result<Vec<GroupElement>> {
        self.reps.iter().map(|&(i, j)| quotient.project(&[i, j])).collect()
    }
}

pub fn fold_construction(spec: &TriangleSpec) -> Result<FoldedGraph> {
    let boxed = BoxReduction::new(&spec.lattice())?;
    let n = boxed.size();
    let reps: Vec<(i64, i64)> = (0..n).map(|k| boxed.representative(k)).collect();
    // orbit containing D(i, j)
    let down_orbit = |i: i64, j: i64| boxed.index(spec.p1 - 1 - i, spec.p2 - 1 - j);

    let mut directed: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    let mut semiedges = vec![0u32; n];
    for (v, &(i, j)) in reps.iter().enumerate() {
        for (di, dj) in [(i, j), (i - 1, j), (i, j - 1)] {
            let w = down_orbit(di, dj);
            if w == v {
                // the grid edge joins U to its own half-turn image
                semiedges[v] += 1;
            } else {
                *directed.entry((v, w)).or_insert(0) += 1;
            }
        }
    }

    let mut edges = BTreeMap::new();
    for (&(v, w), &m) in &directed {
        if directed.get(&(w, v)) != Some(&m) {
            return Err(Error::InvariantViolation(format!("fold of {spec}: edge {v}-{w} is not matched by its half-turn image")));
        }
        if v < w {
            edges.insert((v, w), m);
        }
    }
    Ok(FoldedGraph { spec: *spec, reps, edges, semiedges })
}

/// True iff labelling each vertex by `project(rep)` is a bijection onto `Γ`
/// carrying the folded graph onto `CayS(Γ, S)` with the same multiplicities.
pub fn verify_isomorphism(folded: &FoldedGraph, quotient: &QuotientMap, sum_set: &SumSet) -> Result<bool> {
    let group = quotient.target();
    if sum_set.group() != group || folded.vertex_count() != group.order() {
        return Ok(false);
    }
    let labels = folded.labels(quotient)?;
    let index: Vec<usize> = labels.iter().map(|l| group.index_of(l)).collect();
    let mut seen = vec![false; group.order()];
    for &k in &index {
        if std::mem::replace(&mut seen[k], true) {
            return Ok(false);
        }
    }

    let cayley = cayley_sum_graph(group, sum_set)?;
    let relabelled: BTreeMap<(usize, usize), u32> = folded
        .edges
        .iter()
        .map(|(&(v, w), &m)| {
            let (a, b) = (index[v], index[w]);
            ((a.min(b), a.max(b)), m)
        })
        .collect();
    if relabelled != *cayley.edges() {
        return Ok(false);
    }
    Ok(folded.semiedges.iter().enumerate().all(|(v, &c)| cayley.semiedge_counts()[index[v]] == c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCensus {
    pub f3: u32,
    pub f6: u32,
    pub s: u32,
}

/// Triangles and semiedges come from the four special points `A`, `Ā`, `B̄`,
/// `C̄`: a gridpoint gives a triangular face, an edge midpoint gives a
/// semiedge. In doubled coordinates a point is a gridpoint iff both
/// coordinates are even. Hexagons follow from `Σ i·f_i = 3|V|`.
pub fn face_census(spec: &TriangleSpec) -> Result<FaceCensus> {
    if spec.determinant() == 0 {
        return Err(Error::DegenerateTriangle);
    }
    let TriangleSpec { p, q, r, s, p1, p2 } = *spec;
    let doubled = [(p1, p2), (p1 + p, p2 + q), (p1 + r, p2 + s), (p1 + p + r, p2 + q + s)];
    let f3 = doubled.iter().filter(|(x, y)| x.rem_euclid(2) == 0 && y.rem_euclid(2) == 0).count() as u32;
    let semis = 4 - f3;
    let v = spec.vertex_count() as u32;
    if !(v - f3).is_multiple_of(2) {
        return Err(Error::InvariantViolation(format!("{spec}: odd hexagon count")));
    }
    Ok(FaceCensus { f3, f6: (v - f3) / 2, s: semis })
}

/// The four possible shapes of the unmatched multiset for a (0,3,6)-fullerene.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemiedgeCase {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "d")]
    D,
}

impl SemiedgeCase {
    pub fn from_semiedges(s: u32) -> Option<Self> {
        match s {
            0 => Some(Self::A),
            2 => Some(Self::B),
            3 => Some(Self::C),
            4 => Some(Self::D),
            _ => None,
        }
    }

    pub fn expected_m(self) -> &'static [i64] {
        match self {
            Self::A => &[3, -1, -1, -1],
            Self::B => &[3, -1],
            Self::C => &[3],
            Self::D => &[3, 1],
        }
    }

    pub fn letter(self) -> char {
        match self {
            Self::A => 'a',
            Self::B => 'b',
            Self::C => 'c',
            Self::D => 'd',
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FullereneReport {
    pub spec: TriangleSpec,
    pub moduli: Vec<i64>,
    pub sum_set: Vec<Vec<i64>>,
    pub vertex_count: usize,
    pub census: FaceCensus,
    pub spectrum: SpectrumPartition,
    pub case: SemiedgeCase,
}

impl FullereneReport {
    pub fn semiedges(&self) -> u32 {
        self.census.s
    }

    /// Heuristic isomorphism key: equal graphs always share it, but distinct
    /// graphs may collide.
    pub fn dedup_key(&self) -> (usize, u32, Vec<i64>, Vec<i64>) {
        let spectrum = self.spectrum.full().iter().map(|x| (x * 1e6).round() as i64).collect();
        (self.vertex_count, self.census.s, self.moduli.clone(), spectrum)
    }
}

/// Builds the graph, its spectrum and face census, and cross-checks them.
pub fn classify(spec: &TriangleSpec) -> Result<FullereneReport> {
    let (quotient, sum_set) = group_and_sumset(spec)?;
    let graph = cayley_sum_graph(quotient.target(), &sum_set)?;
    classify_graph(spec, &graph)
}

fn classify_graph(spec: &TriangleSpec, graph: &CaySumGraph) -> Result<FullereneReport> {
    let census = face_census(spec)?;
    let trace = graph.adjacency().trace();
    if trace != census.s as u64 {
        return Err(Error::InvariantViolation(format!("{spec}: trace {trace} but {} semiedges from the face census", census.s)));
    }
    let case = SemiedgeCase::from_semiedges(census.s)
        .ok_or_else(|| Error::InvariantViolation(format!("{spec}: impossible semiedge count {}", census.s)))?;
    let spectrum = character_spectrum(graph);
    if spectrum.m_canonical != case.expected_m() {
        return Err(Error::InvariantViolation(format!(
            "{spec}: M = {:?} does not match case ({}) {:?}",
            spectrum.m_canonical,
            case.letter(),
            case.expected_m()
        )));
    }
    Ok(FullereneReport {
        spec: *spec,
        moduli: graph.group().moduli().to_vec(),
        sum_set: graph.sum_set().elements().iter().map(|e| e.coords().to_vec()).collect(),
        vertex_count: graph.vertex_count(),
        census,
        spectrum,
        case,
    })
}

/// Every sublattice of `Z^2` of index at most `max_index`, once, as the
/// Hermite basis `(a, 0), (b, c)` with `a·c = n`, `0 <= b < a`, each
/// combined with the four shifts `(p1, p2)`.
pub fn enumerate_specs(max_index: u32) -> impl Iterator<Item = TriangleSpec> {
    let max = max_index as i64;
    (1..=max).flat_map(|n| {
        (1..=n).filter(move |a| n % a == 0).flat_map(move |a| {
            let c = n / a;
            (0..a).flat_map(move |b| {
                [(0, 0), (0, 1), (1, 0), (1, 1)]
                    .into_iter()
                    .map(move |(p1, p2)| TriangleSpec { p: a, q: 0, r: b, s: c, p1, p2 })
            })
        })
    })
}

/// One failed check for one spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub spec: TriangleSpec,
    pub check: &'static str,
    pub detail: String,
}

/// Runs every invariant on one spec. When `numeric_oracle` is set the
/// character spectrum is also compared with the Jacobi eigenvalues.
pub fn verify_spec(spec: &TriangleSpec, numeric_oracle: bool) -> (Option<FullereneReport>, Vec<Violation>) {
    let mut violations = Vec::new();
    let mut fail = |check: &'static str, detail: String| violations.push(Violation { spec: *spec, check, detail });

    let (quotient, sum_set) = match group_and_sumset(spec) {
        Ok(x) => x,
        Err(e) => {
            fail("group", e.to_string());
            return (None, violations);
        }
    };
    let graph = match cayley_sum_graph(quotient.target(), &sum_set) {
        Ok(g) => g,
        Err(e) => {
            fail("graph", e.to_string());
            return (None, violations);
        }
    };
    if graph.vertex_count() != spec.vertex_count() {
        fail("vertex count", format!("{} vertices, |ps - qr| = {}", graph.vertex_count(), spec.vertex_count()));
    }
    if graph.degrees().iter().any(|&d| d != 3) {
        fail("regularity", "some vertex degree differs from 3".into());
    }

    let census = match face_census(spec) {
        Ok(c) => c,
        Err(e) => {
            fail("face census", e.to_string());
            return (None, violations);
        }
    };
    if census.s + census.f3 != 4 {
        fail("s + f3 = 4", format!("s = {}, f3 = {}", census.s, census.f3));
    }
    if !matches!(census.s, 0 | 2 | 3 | 4) {
        fail("semiedge count", format!("s = {}", census.s));
    }
    let trace = graph.adjacency().trace();
    if trace != census.s as u64 {
        fail("trace", format!("trace {trace}, s = {}", census.s));
    }

    match fold_construction(spec) {
        Ok(folded) => {
            if folded.semiedge_total() != census.s {
                fail("fold semiedges", format!("{} in the fold, {} in the census", folded.semiedge_total(), census.s));
            }
            match verify_isomorphism(&folded, &quotient, &sum_set) {
                Ok(true) => {}
                Ok(false) => fail("isomorphism", "fold is not carried onto CayS(Γ,S) by f".into()),
                Err(e) => fail("isomorphism", e.to_string()),
            }
        }
        Err(e) => fail("fold", e.to_string()),
    }

    let spectrum = character_spectrum(&graph);
    if spectrum.m_raw.iter().sum::<i64>() != census.s as i64 {
        fail("sum of M", format!("Σ M = {}, s = {}", spectrum.m_raw.iter().sum::<i64>(), census.s));
    }
    let case = SemiedgeCase::from_semiedges(census.s);
    match case {
        Some(case) if spectrum.m_canonical == case.expected_m() => {}
        _ => fail("case table", format!("s = {}, M = {:?}", census.s, spectrum.m_canonical)),
    }
    let full = spectrum.full();
    let m: Vec<f64> = spectrum.m_canonical.iter().map(|&x| x as f64).collect();
    if !spectra::spectrum_is_paired(&full, &m, MATCH_TOLERANCE) {
        fail("pairing", "spectrum minus M is not symmetric under negation".into());
    }
    if numeric_oracle {
        match spectra::numeric_spectrum(&graph.adjacency()) {
            Ok(numeric) if spectra::spectra_match(&numeric, &full, MATCH_TOLERANCE) => {}
            Ok(_) => fail("numeric oracle", "Jacobi eigenvalues differ from the character spectrum".into()),
            Err(e) => fail("numeric oracle", e.to_string()),
        }
    }

    let report = case.map(|case| FullereneReport {
        spec: *spec,
        moduli: graph.group().moduli().to_vec(),
        sum_set: graph.sum_set().elements().iter().map(|e| e.coords().to_vec()).collect(),
        vertex_count: graph.vertex_count(),
        census,
        spectrum,
        case,
    });
    (report, violations)
}

/// Outcome of [`verify_census`].
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CensusVerification {
    pub specs_checked: usize,
    pub oracle_checked: usize,
    pub case_counts: BTreeMap<char, usize>,
    pub violations: Vec<Violation>,
}

impl CensusVerification {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every enumerated spec up to `max_index`; specs of index at most
/// `oracle_max_index` are also checked against the numeric eigensolver.
/// Runs on the current rayon pool; results are in enumeration order.
pub fn verify_census(max_index: u32, oracle_max_index: u32) -> CensusVerification {
    let specs: Vec<TriangleSpec> = enumerate_specs(max_index).collect();
    let results: Vec<_> = specs
        .par_iter()
        .map(|spec| {
            let oracle = spec.vertex_count() <= oracle_max_index as usize;
            let (report, violations) = verify_spec(spec, oracle);
            (report.map(|r| r.case), violations, oracle)
        })
        .collect();

    let mut out = CensusVerification { specs_checked: specs.len(), ..Default::default() };
    for (case, violations, oracle) in results {
        if let Some(case) = case {
            *out.case_counts.entry(case.letter()).or_insert(0) += 1;
        }
        out.oracle_checked += oracle as usize;
        out.violations.extend(violations);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::SnfDecomposition;

    fn spec(v: [i64; 6]) -> TriangleSpec {
        TriangleSpec::new(v[0], v[1], v[2], v[3], v[4], v[5]).unwrap()
    }

    fn reference_quotient() -> QuotientMap {
        let snf = SnfDecomposition {
            u: IntMatrix::from_rows(&[[0, 1], [-1, -7]]).unwrap(),
            v: IntMatrix::from_rows(&[[-2, -3], [1, 1]]).unwrap(),
            d: IntMatrix::diagonal(&[2, 20]),
        };
        QuotientMap::from_snf(&spec([6, 2, -2, 6, 0, 0]).lattice(), &snf).unwrap()
    }

    fn coords(s: &SumSet) -> Vec<Vec<i64>> {
        s.sorted().iter().map(|e| e.coords().to_vec()).collect()
    }

    #[test]
    fn parses_and_reduces_shift() {
        let t: TriangleSpec = "6,2,-2,6,3,-2".parse().unwrap();
        assert_eq!((t.p1, t.p2), (1, 0));
        assert_eq!(t.to_string(), "6,2,-2,6,1,0");
        assert!(matches!("1,2,2,4,0,0".parse::<TriangleSpec>(), Err(Error::DegenerateTriangle)));
        assert!("1,2,3".parse::<TriangleSpec>().is_err());
        assert!("1,x,0,1,0,0".parse::<TriangleSpec>().is_err());
    }

    #[test]
    fn golden_group_and_sum_set() {
        let t = spec([6, 2, -2, 6, 0, 0]);
        let (q, s) = group_and_sumset(&t).unwrap();
        assert_eq!(q.target().moduli(), &[2, 20]);
        assert_eq!(s.len(), 3);

        let reference = sum_set_for(&t, &reference_quotient()).unwrap();
        assert_eq!(coords(&reference), vec![vec![0, 1], vec![1, 7], vec![1, 8]]);

        let shifted = sum_set_for(&spec([6, 2, -2, 6, 1, 0]), &reference_quotient()).unwrap();
        assert_eq!(coords(&shifted), vec![vec![0, 0], vec![1, 6], vec![1, 7]]);
    }

    #[test]
    fn theta_from_unit_triangle() {
        let (q, s) = group_and_sumset(&spec([1, 0, 0, 1, 0, 0])).unwrap();
        assert_eq!(q.target().order(), 1);
        assert_eq!(s.elements(), &[q.target().zero(), q.target().zero(), q.target().zero()]);
        let f = fold_construction(&spec([1, 0, 0, 1, 0, 0])).unwrap();
        assert_eq!(f.vertex_count(), 1);
        assert_eq!(f.semiedge_total(), 3);
        assert!(f.edges().is_empty());
    }

    #[test]
    fn folds() {
        let f = fold_construction(&spec([6, 2, -2, 6, 0, 0])).unwrap();
        assert_eq!(f.vertex_count(), 40);
        assert_eq!(f.semiedge_total(), 0);
        assert!(f.degrees().iter().all(|&d| d == 3));

        let k4 = fold_construction(&spec([2, 0, 0, 2, 0, 0])).unwrap();
        assert_eq!(k4.vertex_count(), 4);
        assert_eq!(k4.semiedge_total(), 0);
        assert_eq!(k4.edges().len(), 6);
        assert!(k4.edges().values().all(|&m| m == 1));
    }

    #[test]
    fn fold_matches_cayley_sum_graph() {
        for v in [[1, 0, 0, 1, 0, 0], [6, 2, -2, 6, 0, 0], [6, 2, -2, 6, 1, 0], [3, 1, -1, 2, 1, 1], [-4, 1, 2, 3, 0, 1]] {
            let t = spec(v);
            let (q, s) = group_and_sumset(&t).unwrap();
            assert!(verify_isomorphism(&fold_construction(&t).unwrap(), &q, &s).unwrap(), "{t}");
        }
    }

    #[test]
    fn wrong_sum_set_is_rejected() {
        let t = spec([6, 2, -2, 6, 0, 0]);
        let (q, _) = group_and_sumset(&t).unwrap();
        let other = sum_set_for(&spec([6, 2, -2, 6, 1, 0]), &q).unwrap();
        assert!(!verify_isomorphism(&fold_construction(&t).unwrap(), &q, &other).unwrap());
    }

    #[test]
    fn shifted_golden_semiedges_under_reference_transform() {
        let t = spec([6, 2, -2, 6, 1, 0]);
        let q = reference_quotient();
        let s = sum_set_for(&t, &q).unwrap();
        let folded = fold_construction(&t).unwrap();
        assert!(verify_isomorphism(&folded, &q, &s).unwrap());
        let labels = folded.labels(&q).unwrap();
        let mut semi: Vec<Vec<i64>> = folded
            .semiedge_counts()
            .iter()
            .zip(&labels)
            .filter(|(&c, _)| c > 0)
            .map(|(_, l)| l.coords().to_vec())
            .collect();
        semi.sort();
        assert_eq!(semi, vec![vec![0, 0], vec![0, 10], vec![1, 0], vec![1, 10]]);
    }

    #[test]
    fn face_counts() {
        assert_eq!(face_census(&spec([6, 2, -2, 6, 0, 0])).unwrap(), FaceCensus { f3: 4, f6: 18, s: 0 });
        assert_eq!(face_census(&spec([6, 2, -2, 6, 1, 0])).unwrap(), FaceCensus { f3: 0, f6: 20, s: 4 });
        assert_eq!(face_census(&spec([1, 0, 0, 1, 0, 0])).unwrap(), FaceCensus { f3: 1, f6: 0, s: 3 });
        assert_eq!(face_census(&spec([2, 0, 0, 2, 0, 0])).unwrap(), FaceCensus { f3: 4, f6: 0, s: 0 });
    }

    #[test]
    fn classification() {
        let k4 = classify(&spec([2, 0, 0, 2, 0, 0])).unwrap();
        assert_eq!(k4.case, SemiedgeCase::A);
        assert_eq!(k4.spectrum.m_canonical, vec![3, -1, -1, -1]);

        let theta = classify(&spec([1, 0, 0, 1, 0, 0])).unwrap();
        assert_eq!(theta.case, SemiedgeCase::C);
        assert_eq!(theta.spectrum.m_canonical, vec![3]);

        let shifted = classify(&spec([6, 2, -2, 6, 1, 0])).unwrap();
        assert_eq!(shifted.case, SemiedgeCase::D);
        assert_eq!(shifted.spectrum.m_raw, vec![3, 1, 1, -1]);
        assert_eq!(shifted.spectrum.m_canonical, vec![3, 1]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_specs(1).count(), 4);
        assert_eq!(enumerate_specs(2).count(), 16);
        assert_eq!(enumerate_specs(4).count(), 60);
        let specs: Vec<_> = enumerate_specs(12).collect();
        assert!(specs.iter().all(|t| t.determinant() > 0));
        let mut hnfs: Vec<IntMatrix> = specs.iter().map(|t| intlinalg::hermite_upper(&t.lattice()).unwrap()).collect();
        hnfs.dedup();
        let before = hnfs.len();
        hnfs.sort_by_key(|h| h.rows());
        hnfs.dedup();
        assert_eq!(before, hnfs.len(), "a sublattice was enumerated twice");
    }

    #[test]
    fn unit_lattice_rows() {
        for t in enumerate_specs(1) {
            let c = face_census(&t).unwrap();
            assert!(matches!(c.s, 0 | 2 | 3 | 4));
            assert_eq!(c.s + c.f3, 4);
        }
    }

    #[test]
    fn non_obtuse_reduction_keeps_the_graph() {
        let dot = |u: (i64, i64), v: (i64, i64)| 2 * u.0 * v.0 + 2 * u.1 * v.1 + u.0 * v.1 + u.1 * v.0;
        for t in [spec([6, 2, -2, 6, 0, 0]), spec([1, 0, 7, 3, 1, 0]), spec([5, -3, 11, 2, 1, 1])] {
            let n = t.non_obtuse();
            let (ab, ac) = ((n.p, n.q), (n.r, n.s));
            let bc = (ac.0 - ab.0, ac.1 - ab.1);
            assert!(dot(ab, ac) >= 0);
            assert!(dot((-ab.0, -ab.1), bc) >= 0);
            assert!(dot((-ac.0, -ac.1), (-bc.0, -bc.1)) >= 0);
            assert_eq!(intlinalg::hermite_upper(&n.lattice()).unwrap(), intlinalg::hermite_upper(&t.lattice()).unwrap());
            let (a, b) = (classify(&t).unwrap(), classify(&n).unwrap());
            assert!(spectra::spectra_match(&a.spectrum.full(), &b.spectrum.full(), 1e-9));
        }
    }

    #[test]
    fn small_census_is_clean() {
        let v = verify_census(12, 12);
        assert!(v.passed(), "{:?}", v.violations);
        assert_eq!(v.specs_checked, enumerate_specs(12).count());
        assert_eq!(v.case_counts.values().sum::<usize>(), v.specs_checked);
    }
}
