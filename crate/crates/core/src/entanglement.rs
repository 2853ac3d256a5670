//! Pure-state entanglement measures.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::basis::{AtomLevel, BasisLabel, StateVector};
use crate::error::{Error, Result};
use crate::C64;

/// `2|ad − bc|` for amplitudes in the product order `|00⟩, |01⟩, |10⟩, |11⟩`.
///
/// No normalization is applied; for a normalized qubit block the value lies
/// in `[0, 1]`, for a leaky block it is bounded by the block's population.
pub fn concurrence_of(a: [C64; 4]) -> f64 {
    2.0 * (a[0] * a[3] - a[1] * a[2]).norm()
}

/// Concurrence of a normalized two-qubit pure state whose four basis
/// labels are ordered `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn concurrence(state: &StateVector) -> Result<f64> {
    if state.dim() != 4 {
        return Err(Error::Partition(format!("concurrence needs a 2x2 state, got dimension {}", state.dim())));
    }
    state.require_normalized()?;
    let a = state.amplitudes();
    Ok(concurrence_of([a[0], a[1], a[2], a[3]]).min(1.0))
}

/// One tensor factor of a composite basis label.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Subsystem {
    Atom(usize),
    Cavity(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Factor {
    Level(AtomLevel),
    Photons(u32),
}

fn split(label: &BasisLabel, sub: Subsystem) -> Option<(Factor, BasisLabel)> {
    let mut rest = label.clone();
    match sub {
        Subsystem::Atom(i) if i < label.atoms.len() => Some((Factor::Level(rest.atoms.remove(i)), rest)),
        Subsystem::Cavity(j) if j < label.photons.len() => Some((Factor::Photons(rest.photons.remove(j)), rest)),
        _ => None,
    }
}

/// `Tr ρ²` of the reduced density operator of `subsystem`.
///
/// Labels absent from the basis carry zero amplitude, so any subset of the
/// full product basis is accepted as long as every label has the same shape.
pub fn reduced_purity(state: &StateVector, subsystem: Subsystem) -> Result<f64> {
    state.require_normalized()?;
    let basis = state.basis();
    let Some(first) = basis.first() else {
        return Err(Error::Partition(String::from("empty basis")));
    };
    let (n_atoms, n_modes) = (first.atoms.len(), first.photons.len());
    if basis.iter().any(|l| l.atoms.len() != n_atoms || l.photons.len() != n_modes) {
        return Err(Error::Partition(String::from("basis labels do not share one tensor structure")));
    }
    // Rows indexed by the kept factor, columns by the traced remainder.
    let mut rows: BTreeMap<Factor, BTreeMap<BasisLabel, C64>> = BTreeMap::new();
    for (label, amp) in basis.iter().zip(state.amplitudes()) {
        let (keep, rest) = split(label, subsystem).ok_or_else(|| {
            Error::Partition(format!("{subsystem:?} is not a factor of labels with {n_atoms} atoms, {n_modes} modes"))
        })?;
        *rows.entry(keep).or_default().entry(rest).or_insert(C64::new(0.0, 0.0)) += amp;
    }
    let rows: Vec<_> = rows.into_values().collect();
    let mut purity = 0.0;
    for r in &rows {
        for s in &rows {
            let rho: C64 = r.iter().filter_map(|(k, a)| s.get(k).map(|b| a * b.conj())).sum();
            purity += rho.norm_sqr();
        }
    }
    Ok(purity)
}
