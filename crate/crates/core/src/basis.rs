//! Basis labels over atom ⊗ Fock product states and pure state vectors.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::C64;

/// Tolerance used when a state is required to be normalized.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Internal level of a three-level Λ atom.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomLevel {
    G1,
    E,
    G2,
}

impl AtomLevel {
    pub fn name(self) -> &'static str {
        match self {
            AtomLevel::G1 => "g1",
            AtomLevel::E => "e",
            AtomLevel::G2 => "g2",
        }
    }
}

impl fmt::Display for AtomLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Product-state label: one level per atom and one photon number per cavity
/// mode, in the order the owning protocol declares.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel {
    pub atoms: Vec<AtomLevel>,
    pub photons: Vec<u32>,
}

impl BasisLabel {
    pub fn new(atoms: Vec<AtomLevel>, photons: Vec<u32>) -> Self {
        Self { atoms, photons }
    }

    /// One atom and one cavity mode.
    pub fn single(level: AtomLevel, photons: u32) -> Self {
        Self { atoms: vec![level], photons: vec![photons] }
    }

    pub fn is_excited(&self) -> bool {
        self.atoms.contains(&AtomLevel::E)
    }

    pub fn total_photons(&self) -> u32 {
        self.photons.iter().sum()
    }

    /// Underscore-joined form used for column names, e.g. `g1_0`.
    pub fn tag(&self) -> String {
        let mut parts: Vec<String> = self.atoms.iter().map(|a| String::from(a.name())).collect();
        parts.extend(self.photons.iter().map(|n| format!("{n}")));
        parts.join("_")
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in &self.atoms {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        for n in &self.photons {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
            first = false;
        }
        Ok(())
    }
}

/// The ordered basis `(g1,n), (e,n), (g2,n+1)` of manifold `n`.
pub fn manifold_basis(n: u32) -> Vec<BasisLabel> {
    vec![
        BasisLabel::single(AtomLevel::G1, n),
        BasisLabel::single(AtomLevel::E, n),
        BasisLabel::single(AtomLevel::G2, n + 1),
    ]
}

/// Returns the manifold index if `basis` is exactly `manifold_basis(n)`.
pub fn manifold_index(basis: &[BasisLabel]) -> Option<u32> {
    let first = basis.first()?;
    if first.atoms.len() != 1 || first.photons.len() != 1 {
        return None;
    }
    let n = first.photons[0];
    (basis == manifold_basis(n).as_slice()).then_some(n)
}

/// Complex amplitudes over a labelled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: Vec<BasisLabel>,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(basis: Vec<BasisLabel>, amplitudes: Vec<C64>) -> Result<Self> {
        if basis.len() != amplitudes.len() {
            return Err(Error::BasisMismatch(format!(
                "{} basis labels but {} amplitudes",
                basis.len(),
                amplitudes.len()
            )));
        }
        Ok(Self { basis, amplitudes })
    }

    /// Unit vector on `basis[index]`.
    pub fn basis_state(basis: Vec<BasisLabel>, index: usize) -> Result<Self> {
        if index >= basis.len() {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {}",
                basis.len()
            )));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); basis.len()];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { basis, amplitudes })
    }

    /// State in manifold `n` from its three amplitudes.
    pub fn in_manifold(n: u32, amplitudes: [C64; 3]) -> Self {
        Self { basis: manifold_basis(n), amplitudes: amplitudes.to_vec() }
    }

    pub(crate) fn from_vector3(n: u32, v: &Vector3<C64>) -> Self {
        Self::in_manifold(n, [v[0], v[1], v[2]])
    }

    /// Amplitudes as a 3-vector; errors unless the basis is a manifold triple.
    pub fn manifold_vector(&self) -> Result<(u32, Vector3<C64>)> {
        let n = manifold_index(&self.basis).ok_or_else(|| {
            Error::BasisMismatch(String::from("state basis is not a single (g1,n),(e,n),(g2,n+1) manifold"))
        })?;
        let a = &self.amplitudes;
        Ok((n, Vector3::new(a[0], a[1], a[2])))
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn index_of(&self, label: &BasisLabel) -> Option<usize> {
        self.basis.iter().position(|l| l == label)
    }

    /// Amplitude on `label`, zero when the label is not part of the basis.
    pub fn amplitude(&self, label: &BasisLabel) -> C64 {
        self.index_of(label).map_or(C64::new(0.0, 0.0), |i| self.amplitudes[i])
    }

    pub fn population(&self, label: &BasisLabel) -> f64 {
        self.amplitude(label).norm_sqr()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amplitudes.iter().map(|a| a.norm_sqr()).sum())
    }

    pub fn is_normalized(&self, tolerance: f64) -> bool {
        libm::fabs(self.norm() - 1.0) <= tolerance
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized(NORM_TOLERANCE) {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm: self.norm() })
        }
    }

    /// ⟨self|other⟩; both states must share the same basis.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(String::from("inner product over different bases")));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Sum of populations over labels that satisfy `pred`.
    pub fn population_where(&self, pred: impl Fn(&BasisLabel) -> bool) -> f64 {
        self.basis
            .iter()
            .zip(&self.amplitudes)
            .filter(|(l, _)| pred(l))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}
