#![allow(dead_code)]

use std::collections::HashMap;

use ncps_core::algebra::Word;
use ncps_core::trace::TauClass;
use ncps_num::{ConcreteElement, ThetaMatrix, C64};

/// Evaluates a word on concrete data: each atom `δ^α(g)` or `δ^α(g*)` is
/// replaced by the corresponding Fourier sum, products are twisted.
pub fn evaluate_word(w: &Word, atoms: &HashMap<String, ConcreteElement>, theta: &ThetaMatrix) -> ConcreteElement {
    let dim = theta.dim();
    let mut acc = ConcreteElement::scalar(1.0).normalized(dim).unwrap();
    for g in w.factors() {
        let base = atoms.get(g.name()).unwrap_or_else(|| panic!("no data for {}", g.name()));
        let base = if g.is_star() { base.adjoint() } else { base.clone() };
        let alpha: Vec<u32> = g.derivatives()[..dim].iter().map(|d| *d as u32).collect();
        acc = acc.multiply(&base.normalized(dim).unwrap().derive(&alpha), theta);
    }
    acc
}

/// `τ` of a class representative, with `t = 1`.
pub fn evaluate_tau(class: &TauClass, atoms: &HashMap<String, ConcreteElement>, theta: &ThetaMatrix) -> C64 {
    class
        .representative()
        .terms()
        .map(|(w, c)| {
            let z = c.to_complex_f64(1.0);
            evaluate_word(w, atoms, theta).tau() * C64::new(z.re, z.im)
        })
        .sum()
}

/// `d/dt Tr(h e^{−εD_t²})` at `t = 0` for `D_t = e^{th/2} D e^{th/2}`, by
/// Duhamel's formula in the plane-wave basis of the free operator. Only pairs
/// `k, k+m` inside the box `|k|_∞ ≤ cutoff` contribute. The spinor trace of
/// `(|k|²+|k+m|²)/2 + (k+m)·γ k·γ` is `|2k+m|²`, and the Θ-phases cancel.
pub fn conformal_heat_derivative(h: &ConcreteElement, dim: usize, cutoff: i64, eps: f64) -> f64 {
    let h = h.normalized(dim).unwrap();
    let side = (2 * cutoff + 1) as usize;
    let mut total = 0.0;
    for idx in 0..side.pow(dim as u32) {
        let mut k = vec![0i64; dim];
        let mut r = idx;
        for c in k.iter_mut() {
            *c = (r % side) as i64 - cutoff;
            r /= side;
        }
        let b: f64 = k.iter().map(|x| (x * x) as f64).sum();
        for (m, c) in h.modes() {
            let km: Vec<i64> = k.iter().zip(m).map(|(x, y)| x + y).collect();
            if km.iter().any(|x| x.abs() > cutoff) {
                continue;
            }
            let a: f64 = km.iter().map(|x| (x * x) as f64).sum();
            let phi = if a == b { (-eps * a).exp() } else { ((-eps * b).exp() - (-eps * a).exp()) / (eps * (a - b)) };
            let w: f64 = k.iter().zip(&km).map(|(x, y)| ((x + y) * (x + y)) as f64).sum();
            total += c.norm_sqr() * w * phi;
        }
    }
    -eps * total
}
