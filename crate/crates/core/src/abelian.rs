//! Finite abelian groups `Z_{n_1} x ... x Z_{n_u}`, their characters, and
//! their construction as quotients `Z^d / L` of integer lattices.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlinalg::{self, IntMatrix, SnfDecomposition};

/// Product of cyclic groups. Factors of order 1 are dropped, so the trivial
/// group has no moduli and exactly one (empty) element.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    moduli: Vec<i64>,
}

/// Element of a [`FiniteAbelianGroup`], one reduced residue per factor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<i64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FiniteAbelianGroup {
    pub fn new(moduli: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut kept = Vec::new();
        for n in moduli {
            if n < 1 {
                return Err(Error::InvalidModulus(n));
            }
            if n > 1 {
                kept.push(n);
            }
        }
        Ok(FiniteAbelianGroup { moduli: kept })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { moduli: Vec::new() }
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().map(|&n| n as usize).product()
    }

    /// True when the moduli form a divisibility chain.
    pub fn is_canonical(&self) -> bool {
        self.moduli.windows(2).all(|w| w[1] % w[0] == 0)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.rank()] }
    }

    /// Reduces arbitrary integer coordinates into the group.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::GroupMismatch(format!(
                "{} coordinates given for a group of rank {}",
                coords.len(),
                self.rank()
            )));
        }
        Ok(GroupElement { coords: coords.iter().zip(&self.moduli).map(|(&x, &n)| x.rem_euclid(n)).collect() })
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.coords.len() == self.rank() && x.coords.iter().zip(&self.moduli).all(|(&c, &n)| (0..n).contains(&c))
    }

    pub(crate) fn ensure_contains(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(format!("{x:?} is not an element of {self:?}")))
        }
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement {
            coords: x.coords.iter().zip(&y.coords).zip(&self.moduli).map(|((&a, &b), &n)| (a + b) % n).collect(),
        }
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement {
            coords: x
                .coords
                .iter()
                .zip(&y.coords)
                .zip(&self.moduli)
                .map(|((&a, &b), &n)| (a - b).rem_euclid(n))
                .collect(),
        }
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        GroupElement { coords: x.coords.iter().zip(&self.moduli).map(|(&a, &n)| (n - a) % n).collect() }
    }

    pub fn double(&self, x: &GroupElement) -> GroupElement {
        self.add(x, x)
    }

    pub fn is_involutive(&self, x: &GroupElement) -> bool {
        x.coords.iter().zip(&self.moduli).all(|(&a, &n)| (2 * a) % n == 0)
    }

    /// Position of `x` in the lexicographic enumeration of the group.
    pub fn index_of(&self, x: &GroupElement) -> usize {
        x.coords.iter().zip(&self.moduli).fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
    }

    /// Inverse of [`index_of`](Self::index_of).
    pub fn element_at(&self, mut index: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        for (slot, &n) in coords.iter_mut().zip(&self.moduli).rev() {
            *slot = (index % n as usize) as i64;
            index /= n as usize;
        }
        GroupElement { coords }
    }

    /// All elements in lexicographic order of their coordinates.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| self.element_at(i))
    }

    /// Elements with `a + a = 0`; every coordinate is `0` or `n_j / 2`.
    pub fn involutive_elements(&self) -> Vec<GroupElement> {
        let mut out = vec![self.zero()];
        for (j, &n) in self.moduli.iter().enumerate() {
            if n % 2 == 0 {
                let shifted: Vec<_> = out
                    .iter()
                    .map(|e| {
                        let mut e = e.clone();
                        e.coords[j] = n / 2;
                        e
                    })
                    .collect();
                out.extend(shifted);
            }
        }
        out.sort();
        out
    }

    /// One element from each pair `{a, -a}` with `a != -a`, namely the
    /// lexicographically smaller one.
    pub fn conjugate_pair_reps(&self) -> Vec<GroupElement> {
        self.elements()
            .filter(|a| {
                let neg = self.neg(a);
                *a < neg
            })
            .collect()
    }

    fn exponent(&self) -> i128 {
        self.moduli.iter().fold(1i128, |l, &n| {
            let g = intlinalg::gcd(l as i64, n) as i128;
            l / g * n as i128
        })
    }

    /// Exact phase of `χ_a(x)` as a fraction `num / den` of a full turn,
    /// reduced into `[0, den)`.
    pub fn character_phase(&self, a: &GroupElement, x: &GroupElement) -> (i128, i128) {
        let den = self.exponent();
        let num = a
            .coords
            .iter()
            .zip(&x.coords)
            .zip(&self.moduli)
            .map(|((&ai, &xi), &n)| (ai as i128 * xi as i128 % n as i128) * (den / n as i128))
            .sum::<i128>()
            .rem_euclid(den);
        (num, den)
    }

    /// `χ_a(x) = exp(2πi Σ a_j x_j / n_j)`.
    pub fn char_value(&self, a: &GroupElement, x: &GroupElement) -> Result<Complex64> {
        self.ensure_contains(a)?;
        self.ensure_contains(x)?;
        Ok(self.char_value_unchecked(a, x))
    }

    pub(crate) fn char_value_unchecked(&self, a: &GroupElement, x: &GroupElement) -> Complex64 {
        let (num, den) = self.character_phase(a, x);
        match (4 * num).checked_rem(den) {
            // quarter turns are returned exactly
            Some(0) => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)]
                [(4 * num / den) as usize],
            _ => Complex64::from_polar(1.0, TAU * num as f64 / den as f64),
        }
    }

    /// Value of a real character `χ_a` (with `a` involutive) as an exact
    /// sign.
    pub fn real_char_sign(&self, a: &GroupElement, x: &GroupElement) -> i64 {
        debug_assert!(self.is_involutive(a));
        let parity: i64 =
            a.coords.iter().zip(&x.coords).zip(&self.moduli).map(|((&ai, &xi), &n)| (2 * ai / n) * xi).sum();
        if parity % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moduli.is_empty() {
            return write!(f, "Z_1");
        }
        let parts: Vec<String> = self.moduli.iter().map(|n| format!("Z_{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Character `χ_a` of a finite abelian group, labelled by `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub label: GroupElement,
}

impl Character {
    pub fn is_real(&self, group: &FiniteAbelianGroup) -> bool {
        group.is_involutive(&self.label)
    }

    pub fn eval(&self, group: &FiniteAbelianGroup, x: &GroupElement) -> Result<Complex64> {
        group.char_value(&self.label, x)
    }
}

/// Projection `Z^d -> Z^d / L` realised through a Smith decomposition of
/// `L`: `x ↦ U·x` reduced modulo the invariant factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    transform: IntMatrix,
    factors: Vec<i64>,
    target: FiniteAbelianGroup,
}

impl QuotientMap {
    /// Builds the map from a decomposition of `lattice`, verifying it first.
    pub fn from_snf(lattice: &IntMatrix, snf: &SnfDecomposition) -> Result<Self> {
        snf.check(lattice)?;
        let factors = snf.invariant_factors();
        if factors.contains(&0) {
            return Err(Error::DegenerateLattice);
        }
        Ok(QuotientMap { transform: snf.u.clone(), target: FiniteAbelianGroup::new(factors.iter().copied())?, factors })
    }

    pub fn source_dim(&self) -> usize {
        self.transform.dim()
    }

    pub fn transform(&self) -> &IntMatrix {
        &self.transform
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn project(&self, x: &[i64]) -> Result<GroupElement> {
        let y = self.transform.mul_vec(x)?;
        let coords = y.iter().zip(&self.factors).filter(|&(_, &d)| d > 1).map(|(&v, &d)| v.rem_euclid(d)).collect();
        Ok(GroupElement { coords })
    }
}

/// `Z^d / (column lattice of L)`.
pub fn quotient_group(lattice: &IntMatrix) -> Result<QuotientMap> {
    let snf = intlinalg::snf(lattice)?;
    if snf.is_singular() {
        return Err(Error::DegenerateLattice);
    }
    QuotientMap::from_snf(lattice, &snf)
}
