//! Spectra of Cayley sum graphs.
//!
//! For `G = CayS(Γ, S)` the eigenvalues are `χ(S)` for every real character
//! `χ` and `±|χ(S)|` for one character from each conjugate pair. The real
//! part is kept exactly (sums of signs); the paired magnitudes are floats.
//! [`numeric_spectrum`] is an independent dense Jacobi solver used to
//! cross-check the character formula.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::abelian::GroupElement;
use crate::caysum::{AdjacencyMatrix, CaySumGraph};
use crate::error::{Error, Result};

/// Absolute tolerance for comparing spectra as multisets.
pub const MATCH_TOLERANCE: f64 = 1e-8;
/// Off-diagonal Frobenius norm at which Jacobi iteration stops.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// `|χ(S)|` at or below this is treated as zero when choosing the phase of
/// a paired eigenvector.
const ZERO_MAGNITUDE: f64 = 1e-14;

/// Spectrum split into the unmatched part `M` and paired magnitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumPartition {
    pub semiedge_total: i64,
    /// `χ(S)` over real characters, descending.
    pub m_raw: Vec<i64>,
    /// `|χ(S)|` over conjugate-pair representatives, descending. Each value
    /// `p` contributes `+p` and `-p` to the spectrum.
    pub paired: Vec<f64>,
    /// `m_raw` after moving every `{x, -x}` pair into the paired part.
    pub m_canonical: Vec<i64>,
}

impl SpectrumPartition {
    /// Whole spectrum, descending.
    pub fn full(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.m_raw.iter().map(|&x| x as f64).collect();
        all.extend(self.paired.iter().flat_map(|&p| [p, -p]));
        sort_descending(&mut all);
        all
    }

    pub fn len(&self) -> usize {
        self.m_raw.len() + 2 * self.paired.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spectral_radius(&self) -> f64 {
        self.full().iter().fold(0.0, |r, x| r.max(x.abs()))
    }

    pub fn to_json(&self) -> SpectrumJson {
        SpectrumJson {
            s: self.semiedge_total,
            m_raw: self.m_raw.clone(),
            m_canonical: self.m_canonical.clone(),
            paired: self.paired.clone(),
            full: self.full(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub s: i64,
    #[serde(rename = "M_raw")]
    pub m_raw: Vec<i64>,
    #[serde(rename = "M_canonical")]
    pub m_canonical: Vec<i64>,
    pub paired: Vec<f64>,
    pub full: Vec<f64>,
}

pub(crate) fn sort_descending(v: &mut [f64]) {
    v.sort_by(|a, b| b.total_cmp(a));
}

/// `χ_a(S)` as a complex number.
pub fn character_sum(graph: &CaySumGraph, a: &GroupElement) -> Complex64 {
    let g = graph.group();
    graph.sum_set().elements().iter().map(|s| g.char_value_unchecked(a, s)).sum()
}

/// `χ_a(S)` for a real character, computed exactly.
fn real_character_sum(graph: &CaySumGraph, a: &GroupElement) -> i64 {
    let g = graph.group();
    graph.sum_set().elements().iter().map(|s| g.real_char_sign(a, s)).sum()
}

pub fn character_spectrum(graph: &CaySumGraph) -> SpectrumPartition {
    let g = graph.group();
    let mut m_raw: Vec<i64> = g.involutive_elements().iter().map(|a| real_character_sum(graph, a)).collect();
    m_raw.sort_unstable_by(|a, b| b.cmp(a));
    let mut paired: Vec<f64> = g.conjugate_pair_reps().iter().map(|a| character_sum(graph, a).norm()).collect();
    sort_descending(&mut paired);
    let m_canonical = canonical_m(&m_raw);
    SpectrumPartition { semiedge_total: graph.semiedge_total() as i64, m_raw, paired, m_canonical }
}

/// Moves `{x, -x}` pairs (including `{0, 0}`) out of `M` until none is left.
/// Since each removed pair sums to zero, `Σ M` is unchanged.
pub fn canonical_m(m_raw: &[i64]) -> Vec<i64> {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for &x in m_raw {
        *counts.entry(x).or_insert(0) += 1;
    }
    let positives: Vec<i64> = counts.keys().copied().filter(|&x| x > 0).collect();
    for x in positives {
        let pairs = counts[&x].min(counts.get(&-x).copied().unwrap_or(0));
        *counts.get_mut(&x).unwrap() -= pairs;
        if let Some(c) = counts.get_mut(&-x) {
            *c -= pairs;
        }
    }
    if let Some(z) = counts.get_mut(&0) {
        *z %= 2;
    }
    let mut out: Vec<i64> = counts.into_iter().flat_map(|(x, c)| std::iter::repeat_n(x, c)).collect();
    out.reverse();
    out
}

/// True if `full` minus `m` is symmetric under negation. Elements of `m` are
/// removed from `full` by nearest match; any element without a match within
/// `tol` makes the answer false.
pub fn spectrum_is_paired(full: &[f64], m: &[f64], tol: f64) -> bool {
    let mut rest: Vec<f64> = full.to_vec();
    rest.sort_by(f64::total_cmp);
    for &x in m {
        let nearest = rest.iter().enumerate().min_by(|(_, a), (_, b)| (*a - x).abs().total_cmp(&(*b - x).abs()));
        match nearest {
            Some((i, &y)) if (y - x).abs() <= tol => {
                rest.remove(i);
            }
            _ => return false,
        }
    }
    let n = rest.len();
    (0..n).all(|i| (rest[i] + rest[n - 1 - i]).abs() <= tol)
}

/// Elementwise comparison of two spectra after sorting both.
pub fn spectra_match(a: &[f64], b: &[f64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    sort_descending(&mut a);
    sort_descending(&mut b);
    a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
}

/// Eigenvalue with a unit eigenvector and its residual `‖A·v − λ·v‖_∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

fn residual(a: &AdjacencyMatrix, value: f64, v: &[f64]) -> f64 {
    a.apply(v).iter().zip(v).map(|(av, x)| (av - value * x).abs()).fold(0.0, f64::max)
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// A complete orthonormal eigenbasis built from the characters.
///
/// Real characters are eigenvectors as they stand. For a representative
/// `χ` of a conjugate pair, pick `α` with `|α| = 1` and `α²·χ(S) = |χ(S)|`;
/// then `Re(αχ)` and `Im(αχ)` are eigenvectors for `+|χ(S)|` and `−|χ(S)|`.
pub fn eigenvectors(graph: &CaySumGraph) -> Vec<EigenPair> {
    let g = graph.group();
    let adj = graph.adjacency();
    let elements: Vec<GroupElement> = g.elements().collect();
    let mut pairs = Vec::with_capacity(elements.len());

    for a in g.involutive_elements() {
        let value = real_character_sum(graph, &a) as f64;
        let vector = normalized(elements.iter().map(|x| g.real_char_sign(&a, x) as f64).collect());
        let residual = residual(&adj, value, &vector);
        pairs.push(EigenPair { value, vector, residual });
    }

    for a in g.conjugate_pair_reps() {
        let sum = character_sum(graph, &a);
        let magnitude = sum.norm();
        let alpha = if magnitude <= ZERO_MAGNITUDE { Complex64::new(1.0, 0.0) } else { Complex64::from_polar(1.0, -sum.arg() / 2.0) };
        let x: Vec<Complex64> = elements.iter().map(|e| alpha * g.char_value_unchecked(&a, e)).collect();
        for (value, part) in [(magnitude, x.iter().map(|z| z.re).collect::<Vec<_>>()), (-magnitude, x.iter().map(|z| z.im).collect())] {
            let vector = normalized(part);
            let residual = residual(&adj, value, &vector);
            pairs.push(EigenPair { value, vector, residual });
        }
    }
    pairs
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
pub fn numeric_spectrum(a: &AdjacencyMatrix) -> Result<Vec<f64>> {
    if let Some((row, col)) = a.first_asymmetry() {
        return Err(Error::NotSymmetric { row, col });
    }
    jacobi_eigenvalues(a.order(), a.to_f64(), JACOBI_TOLERANCE, JACOBI_MAX_SWEEPS)
}

fn off_diagonal_norm(n: usize, a: &[f64]) -> f64 {
    let mut sum = 0.0;
    for r in 0..n {
        for c in r + 1..n {
            sum += 2.0 * a[r * n + c] * a[r * n + c];
        }
    }
    sum.sqrt()
}

/// Dense symmetric eigenvalues on a row-major working copy.
pub fn jacobi_eigenvalues(n: usize, mut a: Vec<f64>, tol: f64, max_sweeps: usize) -> Result<Vec<f64>> {
    let mut off = off_diagonal_norm(n, &a);
    let mut sweeps = 0;
    while off > tol {
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence { sweeps, residual: off });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(n, &mut a, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(n, &a);
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    sort_descending(&mut values);
    Ok(values)
}

/// One rotation in the (p, q) plane zeroing `a[p][q]`.
fn rotate(n: usize, a: &mut [f64], p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[k * n + p] = new_kp;
        a[p * n + k] = new_kp;
        a[k * n + q] = new_kq;
        a[q * n + k] = new_kq;
    }
    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
}
