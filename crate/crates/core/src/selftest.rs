//! Built-in fixtures with known answers.

use crate::associator::{solve_associator, AssocOptions};
use crate::chord::{chord_basis, ChordElement};
use crate::cohomology::{cohomology_report, Complex};
use crate::kernel::Scalar;
use crate::twist::solve_twist;
use crate::ualg::{diagram_basis, make_r, mu_embed, r_ij, t_ij};

/// One fixture outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, ok: bool, detail: impl Into<String>) -> Self {
        Check { name, ok, detail: detail.into() }
    }
}

/// `t^{23} t^{13}` against its six-term expansion in the diagram basis.
pub fn worked_product() -> Check {
    let r = |i, j| r_ij(3, i, j);
    let expected = r(2, 3)
        .mul(&r(1, 3))
        .add(&r(3, 2).mul(&r(1, 3)))
        .add(&r(3, 1).mul(&r(2, 3)))
        .add(&r(2, 1).commutator(&r(2, 3)))
        .add(&r(3, 1).commutator(&r(2, 1)))
        .add(&r(3, 2).mul(&r(3, 1)));
    let got = t_ij(3, 2, 3).mul(&t_ij(3, 1, 3));
    let via_chords = mu_embed(&ChordElement::t(3, 2, 3).mul(&ChordElement::t(3, 1, 3)));
    let residual = got.sub(&expected).len() + via_chords.sub(&expected).len();
    Check::new("product.six_term", residual == 0, format!("{} terms, residual {residual}", expected.len()))
}

/// The infinitesimal braid relations in `T_3` and `T_4`, checked in the diagram algebra as well.
pub fn chord_relations() -> Check {
    let mut bad = 0;
    let mut count = 0;
    for n in 3..=4usize {
        let t = |i: u8, j: u8| ChordElement::t(n, i, j);
        for i in 1..=n as u8 {
            for j in (i + 1)..=n as u8 {
                for k in (1..=n as u8).filter(|&k| k != i && k != j) {
                    let rel = t(i, j).commutator(&t(i, k).add(&t(j, k)));
                    let image = t_ij(n, i as usize, j as usize).commutator(&t_ij(n, i as usize, k as usize).add(&t_ij(n, j as usize, k as usize)));
                    bad += usize::from(!rel.is_zero()) + usize::from(!image.is_zero());
                    count += 2;
                    for l in (k + 1..=n as u8).filter(|&l| l != i && l != j) {
                        bad += usize::from(!t(i, j).commutator(&t(k, l)).is_zero());
                        bad += usize::from(!t_ij(n, i as usize, j as usize).commutator(&t_ij(n, k as usize, l as usize)).is_zero());
                        count += 2;
                    }
                }
            }
        }
    }
    Check::new("chord.relations", bad == 0, format!("{count} relations, {bad} nonzero"))
}

/// `dim (T_3)_d = 2^{d+1} − 1` for `d ≤ 4`.
pub fn chord_dimensions() -> Check {
    let dims: Vec<usize> = (0..=4).map(|d| chord_basis(3, d).len()).collect();
    let ok = dims.iter().enumerate().all(|(d, &n)| n == (1 << (d + 1)) - 1);
    Check::new("chord.dimensions", ok, format!("{dims:?}"))
}

/// `dim (U_n)_N = N! C(N+n−1, n−1)^2` for `n ≤ 3`, `N ≤ 3`.
pub fn universal_dimensions() -> Check {
    let binom = |n: usize, k: usize| (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
    let mut bad = Vec::new();
    for n in 1..=3 {
        for big_n in 0..=3 {
            let want = (1..=big_n).product::<usize>() * binom(big_n + n - 1, n - 1).pow(2);
            let got = diagram_basis(n, big_n).len();
            if got != want {
                bad.push((n, big_n, got, want));
            }
        }
    }
    Check::new("universal.dimensions", bad.is_empty(), if bad.is_empty() { "n ≤ 3, N ≤ 3".to_string() } else { format!("{bad:?}") })
}

/// The first twist coefficient is `−r/2`.
pub fn twist_first_order() -> Check {
    let outcome = solve_associator(2, AssocOptions::default()).and_then(|phi| solve_twist(&phi, 2));
    match outcome {
        Ok(tw) => {
            let residual = tw.j.comp(1).sub(&make_r().scale(&Scalar::frac(-1, 2))).len();
            Check::new("twist.first_order", residual == 0, format!("residual {residual}"))
        }
        Err(e) => Check::new("twist.first_order", false, e.to_string()),
    }
}

/// Wedge-complex cohomology in low degrees: `H^2 = 0` and `Ker ∂^2 = 0` for `N ≤ 3`, `H^3 = 0` at `N = 3`.
pub fn wedge_cohomology() -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for (h, n) in [(2, 1), (2, 2), (2, 3), (3, 3)] {
        match cohomology_report(Complex::Wedge, h, n, false) {
            Ok(rep) => {
                let expect_zero = if h == 2 { rep.dim_kernel } else { rep.dim_cohomology };
                ok &= expect_zero == 0;
                parts.push(format!("H{h}_{n}={} ker={}", rep.dim_cohomology, rep.dim_kernel));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("H{h}_{n}: {e}"));
            }
        }
    }
    Check::new("cohomology.wedge_low_degree", ok, parts.join(", "))
}

pub fn all() -> Vec<Check> {
    vec![worked_product(), chord_relations(), chord_dimensions(), universal_dimensions(), twist_first_order(), wedge_cohomology()]
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_pass() {
        for c in super::all() {
            assert!(c.ok, "{}: {}", c.name, c.detail);
        }
    }
}
