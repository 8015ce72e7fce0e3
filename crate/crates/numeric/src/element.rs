use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::NumError;
use crate::lattice::{sup_norm, Mode};
use crate::theta::ThetaMatrix;
use crate::C64;

/// One Fourier coefficient in the JSON form `{"mode": [..], "re": .., "im": ..}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeCoefficient {
    pub mode: Mode,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Finite Fourier sum `Σ a_k U_k`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<ModeCoefficient>", into = "Vec<ModeCoefficient>")]
pub struct ConcreteElement {
    modes: BTreeMap<Mode, C64>,
}

impl ConcreteElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: f64) -> Self {
        Self::from_modes([(vec![], C64::new(c, 0.0))])
    }

    pub fn unitary(k: Mode) -> Self {
        Self::from_modes([(k, C64::new(1.0, 0.0))])
    }

    /// `amp · (U_k + U_k*)/2`, self-adjoint.
    pub fn cosine(k: Mode, amp: f64) -> Self {
        let neg: Mode = k.iter().map(|c| -c).collect();
        Self::from_modes([(k, C64::new(amp / 2.0, 0.0)), (neg, C64::new(amp / 2.0, 0.0))])
    }

    /// Zero-length modes stand for the unit and are padded on use.
    pub fn from_modes<I: IntoIterator<Item = (Mode, C64)>>(iter: I) -> Self {
        let mut modes: BTreeMap<Mode, C64> = BTreeMap::new();
        for (k, c) in iter {
            *modes.entry(k).or_default() += c;
        }
        modes.retain(|_, c| c.norm() > 0.0);
        ConcreteElement { modes }
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Mode, &C64)> {
        self.modes.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    /// Pads unit modes to `dim` components and checks shapes.
    pub fn normalized(&self, dim: usize) -> Result<ConcreteElement, NumError> {
        let mut out = ConcreteElement::zero();
        for (k, c) in &self.modes {
            let k = if k.is_empty() { vec![0; dim] } else { k.clone() };
            if k.len() != dim {
                return Err(NumError::ModeShape { mode: k, dim });
            }
            *out.modes.entry(k).or_default() += c;
        }
        out.modes.retain(|_, c| c.norm() > 0.0);
        Ok(out)
    }

    pub fn support_radius(&self) -> i64 {
        self.modes.keys().map(|k| sup_norm(k)).max().unwrap_or(0)
    }

    /// `τ(a) = a_0`.
    pub fn tau(&self) -> C64 {
        self.modes.iter().find(|(k, _)| k.iter().all(|c| *c == 0)).map(|(_, c)| *c).unwrap_or_default()
    }

    /// `(Σ a_k U_k)* = Σ conj(a_k) U_{−k}`, using `U_k* = U_{−k}`.
    pub fn adjoint(&self) -> ConcreteElement {
        Self::from_modes(self.modes.iter().map(|(k, c)| (k.iter().map(|x| -x).collect(), c.conj())))
    }

    pub fn self_adjoint_defect(&self) -> f64 {
        let adj = self.adjoint();
        let mut keys: Vec<&Mode> = self.modes.keys().chain(adj.modes.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.iter()
            .map(|k| (self.modes.get(*k).copied().unwrap_or_default() - adj.modes.get(*k).copied().unwrap_or_default()).norm())
            .fold(0.0, f64::max)
    }

    pub fn check_self_adjoint(&self, tol: f64) -> Result<(), NumError> {
        let d = self.self_adjoint_defect();
        if d > tol {
            Err(NumError::NotSelfAdjoint(d))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &ConcreteElement) -> ConcreteElement {
        Self::from_modes(self.modes.iter().chain(other.modes.iter()).map(|(k, c)| (k.clone(), *c)))
    }

    pub fn scale(&self, s: C64) -> ConcreteElement {
        Self::from_modes(self.modes.iter().map(|(k, c)| (k.clone(), c * s)))
    }

    /// Twisted product, `U_k U_l = e^{πiΘ(k,l)} U_{k+l}`.
    pub fn multiply(&self, other: &ConcreteElement, theta: &ThetaMatrix) -> ConcreteElement {
        let mut terms = Vec::new();
        for (k, a) in &self.modes {
            for (l, b) in &other.modes {
                let phase = C64::from_polar(1.0, std::f64::consts::PI * theta.pairing(k, l));
                let sum: Mode = k.iter().zip(l).map(|(x, y)| x + y).collect();
                terms.push((sum, a * b * phase));
            }
        }
        Self::from_modes(terms)
    }

    /// `δ^α(Σ a_k U_k) = Σ k^α a_k U_k`.
    pub fn derive(&self, alpha: &[u32]) -> ConcreteElement {
        Self::from_modes(self.modes.iter().map(|(k, c)| {
            let w: f64 = k.iter().zip(alpha).map(|(x, a)| (*x as f64).powi(*a as i32)).product();
            (k.clone(), c * w)
        }))
    }
}

impl From<Vec<ModeCoefficient>> for ConcreteElement {
    fn from(v: Vec<ModeCoefficient>) -> Self {
        Self::from_modes(v.into_iter().map(|c| (c.mode, C64::new(c.re, c.im))))
    }
}

impl From<ConcreteElement> for Vec<ModeCoefficient> {
    fn from(e: ConcreteElement) -> Self {
        e.modes.into_iter().map(|(mode, c)| ModeCoefficient { mode, re: c.re, im: c.im }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_is_self_adjoint() {
        let h = ConcreteElement::cosine(vec![1, 0], 0.3);
        assert_eq!(h.self_adjoint_defect(), 0.0);
        let u = ConcreteElement::unitary(vec![1, 0]);
        assert!(u.self_adjoint_defect() > 0.5);
    }

    #[test]
    fn unitaries_commute_up_to_phase() {
        let th = ThetaMatrix::planar(2, 0.3);
        let a = ConcreteElement::unitary(vec![1, 0]);
        let b = ConcreteElement::unitary(vec![0, 1]);
        let ab = a.multiply(&b, &th);
        let ba = b.multiply(&a, &th);
        let ratio = ab.modes().next().unwrap().1 / ba.modes().next().unwrap().1;
        assert!((ratio - C64::from_polar(1.0, 0.6 * std::f64::consts::PI)).norm() < 1e-15);
        let uu = a.adjoint().multiply(&a, &th);
        assert!((uu.normalized(2).unwrap().tau() - C64::new(1.0, 0.0)).norm() < 1e-15);
    }
}
