//! Twists `J` with `d̃(J) = Φ`, and the R-matrices they produce.

use crate::associator::Associator;
use crate::chord::ChordSeries;
use crate::cohomology::{big_bracket, coboundary_solver, solve_lambda};
use crate::error::{Error, Result};
use crate::kernel::Scalar;
use crate::ualg::{make_mr, make_r, make_t, mu_embed, project_component, useries_exp, useries_inverse, LenRule, Pattern, UElement, USeries};

fn ins(s: &USeries, parts: &[&[usize]], m: usize) -> USeries {
    let p: Vec<Vec<usize>> = parts.iter().map(|x| x.to_vec()).collect();
    s.insert(&p, m)
}

/// `M^{-1}` for a series with invertible constant term.
fn inv(s: &USeries) -> Result<USeries> {
    useries_inverse(s)
}

/// The noncommutative coboundary `d̃(J) = (J^{2,3} J^{1,23})^{-1} J^{1,2} J^{12,3}`.
pub fn dtilde(j: &USeries) -> Result<USeries> {
    if j.slots() != 2 {
        return Err(Error::usage(format!("d̃ expects 2 slots, got {}", j.slots())));
    }
    let left = ins(j, &[&[2], &[3]], 3).mul(&ins(j, &[&[1], &[2, 3]], 3));
    let right = ins(j, &[&[1], &[2]], 3).mul(&ins(j, &[&[1, 2], &[3]], 3));
    Ok(inv(&left)?.mul(&right))
}

/// `u * J = u^1 u^2 J (u^{12})^{-1}`.
pub fn gauge(u: &USeries, j: &USeries) -> Result<USeries> {
    if u.slots() != 1 || j.slots() != 2 {
        return Err(Error::usage("gauge expects u on 1 slot and J on 2 slots"));
    }
    let uinv = inv(u)?;
    let u1 = u.place(&[1], 2);
    let u2 = u.place(&[2], 2);
    Ok(u1.mul(&u2).mul(j).mul(&ins(&uinv, &[&[1, 2]], 2)))
}

/// `u * Φ = u^{123} Φ (u^{123})^{-1}`.
pub fn gauge3(u: &USeries, phi: &USeries) -> Result<USeries> {
    if u.slots() != 1 || phi.slots() != 3 {
        return Err(Error::usage("gauge3 expects u on 1 slot and Φ on 3 slots"));
    }
    let uinv = inv(u)?;
    Ok(ins(u, &[&[1, 2, 3]], 3).mul(phi).mul(&ins(&uinv, &[&[1, 2, 3]], 3)))
}

/// Residual of `Y e^{α t} = e^{−α m(r)} * Y` through `order`.
pub fn exp_shift_identity_check(y: &UElement, alpha: &Scalar, order: usize) -> Result<USeries> {
    if y.slots() != 2 {
        return Err(Error::usage("Y must live on 2 slots"));
    }
    let ys = USeries::from_element(y, order);
    let lhs = ys.mul(&useries_exp(&USeries::from_element(&make_t().scale(alpha), order))?);
    let u = useries_exp(&USeries::from_element(&make_mr().scale(&-alpha.clone()), order))?;
    Ok(lhs.sub(&gauge(&u, &ys)?))
}

/// Componentwise image of a chord series.
pub fn mu_embed_series(phi: &ChordSeries) -> USeries {
    let mut s = USeries::zero(phi.strands(), phi.order());
    for d in 0..=phi.order() {
        s.set_comp(d, mu_embed(phi.comp(d)));
    }
    s
}

/// What the solver saw in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeLog {
    pub degree: usize,
    /// Terms of the cocycle `Z_n` to split.
    pub z_terms: usize,
    /// Whether the wedge-3 part `μ` vanished.
    pub mu_zero: bool,
    /// Whether a nonzero `λ` correction was added to the previous degree.
    pub lambda_nonzero: bool,
    /// Dimension of `{K | d(K) = 0}` in this degree: the affine freedom in `J_n`.
    pub solution_space_dim: usize,
}

/// A truncated twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twist {
    pub order: usize,
    pub j: USeries,
    pub log: Vec<DegreeLog>,
}

/// `f(λ)`, the part of the degree-`n` coboundary linear in a degree-`(n−1)` shift `λ`.
pub fn f_lambda(lambda: &UElement) -> UElement {
    let r = make_r();
    let r12 = r.place(&[1, 2], 3);
    let r13 = r.place(&[1, 3], 3);
    let r23 = r.place(&[2, 3], 3);
    let l12 = lambda.place(&[1, 2], 3);
    let l13 = lambda.place(&[1, 3], 3);
    let l23 = lambda.place(&[2, 3], 3);
    let s = r12.mul(&l13.add(&l23)).add(&l12.mul(&r13.add(&r23))).sub(&r23.mul(&l12.add(&l13))).sub(&l23.mul(&r12.add(&r13)));
    s.scale(&Scalar::frac(-1, 2))
}

fn fail(degree: usize, detail: impl Into<String>) -> Error {
    Error::Solver { degree, detail: detail.into() }
}

/// Solve `d̃(J) = Φ` through `order`, following the inductive construction.
pub fn solve_twist(phi: &Associator, order: usize) -> Result<Twist> {
    if order < 1 {
        return Err(Error::usage("twist order must be at least 1"));
    }
    if phi.order < order {
        return Err(Error::usage(format!("associator known to order {}, twist asked for {order}", phi.order)));
    }
    solve_twist_for(&mu_embed_series(&phi.phi.truncate(order)))
}

/// Solve `d̃(J) = target` through the order of `target`.
/// Each step needs `d(Z_n) = 0`, which holds when `target` satisfies the pentagon identity.
pub fn solve_twist_for(target: &USeries) -> Result<Twist> {
    if target.slots() != 3 {
        return Err(Error::usage(format!("target must live on 3 slots, got {}", target.slots())));
    }
    let order = target.order();
    if order < 1 {
        return Err(Error::usage("twist order must be at least 1"));
    }
    let mut j = USeries::one(2, order);
    j.set_comp(1, make_r().scale(&Scalar::frac(-1, 2)));
    let check = dtilde(&j.truncate(1))?;
    if check != target.truncate(1) {
        return Err(fail(1, "d̃(1 − r/2) differs from Φ in degree ≤ 1"));
    }
    let mut log = Vec::new();
    for n in 2..=order {
        let padded = j.truncate(n - 1).with_order(n);
        let current = dtilde(&padded)?;
        if current.truncate(n - 1) != target.truncate(n - 1) {
            return Err(fail(n, "lower degrees of d̃(J) drifted"));
        }
        let z = target.comp(n).sub(current.comp(n));
        let solver = coboundary_solver(n)?;
        let split = solver.split(&z)?;
        let lambda = solve_lambda(&split.mu, n)?;
        let third = big_bracket(&make_r(), &lambda).scale(&Scalar::frac(1, 3));
        let fl = f_lambda(&lambda);
        if !lambda.is_zero() {
            let mut shifted = padded.clone();
            let prev = shifted.comp(n - 1).add(&lambda);
            shifted.set_comp(n - 1, prev);
            let direct = dtilde(&shifted)?.comp(n).sub(current.comp(n));
            if direct != fl {
                return Err(fail(n, "f(λ) formula disagrees with the direct change of d̃"));
            }
        }
        let f_prime = solver.solve_coboundary(&fl.add(&third))?;
        if !lambda.is_zero() {
            let prev = j.comp(n - 1).add(&lambda);
            j.set_comp(n - 1, prev);
        }
        j.set_comp(n, split.k.sub(&f_prime));
        let now = dtilde(&j.truncate(n))?;
        if now != target.truncate(n) {
            return Err(fail(n, "d̃(J) ≠ Φ after the update"));
        }
        if j.comp(1) != &make_r().scale(&Scalar::frac(-1, 2)) {
            return Err(fail(n, "degree-1 component moved away from −r/2"));
        }
        log.push(DegreeLog {
            degree: n,
            z_terms: z.len(),
            mu_zero: split.mu.is_zero(),
            lambda_nonzero: !lambda.is_zero(),
            solution_space_dim: solver.cocycle_dim(),
        });
    }
    Ok(Twist { order, j, log })
}

impl Twist {
    /// Per-degree term counts of `d̃(J) − Φ`.
    pub fn residual(&self, phi: &Associator) -> Result<Vec<usize>> {
        let target = mu_embed_series(&phi.phi.truncate(self.order));
        let diff = dtilde(&self.j)?.sub(&target);
        Ok(diff.comps().iter().map(|c| c.len()).collect())
    }
}

/// A truncated universal R-matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    pub order: usize,
    pub r: USeries,
}

/// `R = J^{2,1} e^{t/2} J^{-1}`.
pub fn build_r(j: &USeries) -> Result<RMatrix> {
    let order = j.order();
    let e = useries_exp(&USeries::from_element(&make_t().scale(&Scalar::frac(1, 2)), order))?;
    let r = j.permute(&[2, 1]).mul(&e).mul(&inv(j)?);
    Ok(RMatrix { order, r })
}

/// QYBE residuals of an R-matrix, per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QybeReport {
    /// Term counts of `R^{12}R^{13}R^{23} − R^{23}R^{13}R^{12}`.
    pub qybe: Vec<usize>,
    /// Term counts of `[[r,R_N]] − Σ (R^{23}_{p″}R^{13}_{p′}R^{12}_p − R^{12}_p R^{13}_{p′} R^{23}_{p″})`, for `N ≥ 1` (index `N−1`).
    /// The sum runs over `p + p′ + p″ = N + 1` with every index below `N`.
    pub recursion: Vec<usize>,
}

impl QybeReport {
    pub fn ok(&self) -> bool {
        self.qybe.iter().chain(&self.recursion).all(|&k| k == 0)
    }

    /// First degree with a nonzero QYBE residual.
    pub fn first_failure(&self) -> Option<usize> {
        self.qybe.iter().position(|&k| k != 0)
    }
}

pub fn check_qybe(rm: &RMatrix) -> QybeReport {
    let r = &rm.r;
    let r12 = r.place(&[1, 2], 3);
    let r13 = r.place(&[1, 3], 3);
    let r23 = r.place(&[2, 3], 3);
    let diff = r12.mul(&r13).mul(&r23).sub(&r23.mul(&r13).mul(&r12));
    let qybe = diff.comps().iter().map(|c| c.len()).collect();
    let rr = make_r();
    let mut recursion = Vec::new();
    // Degree N+1 terms are needed, so N stops one short of the order.
    for big_n in 1..rm.order {
        let mut y = UElement::zero(3);
        for p in 0..big_n {
            for p1 in 0..big_n {
                let Some(p2) = (big_n + 1).checked_sub(p + p1) else { continue };
                if p2 >= big_n {
                    continue;
                }
                let a = r23.comp(p2).mul(r13.comp(p1)).mul(r12.comp(p));
                let b = r12.comp(p).mul(r13.comp(p1)).mul(r23.comp(p2));
                y.add_scaled(&a.sub(&b), &Scalar::one());
            }
        }
        recursion.push(big_bracket(&rr, r.comp(big_n)).sub(&y).len());
    }
    QybeReport { qybe, recursion }
}

/// Residuals of the two slot-pattern memberships of the R-matrix, per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormReport {
    /// Term counts of the part of `R_N` with empty y-word in slot 2.
    pub second_slot_b: Vec<usize>,
    /// Term counts of the part of `R_N` with empty x-word in slot 1.
    pub first_slot_a: Vec<usize>,
}

impl FormReport {
    pub fn ok(&self) -> bool {
        self.second_slot_b.iter().chain(&self.first_slot_a).all(|&k| k == 0)
    }
}

pub fn check_form(rm: &RMatrix) -> Result<FormReport> {
    if rm.r.comp(0) != &UElement::one(2) || (rm.order >= 1 && rm.r.comp(1) != &make_r()) {
        return Err(Error::Precondition { what: "R_0 = 1 and R_1 = r".into(), residual_terms: 0 });
    }
    let no_b2 = Pattern::any(2).with_y(2, LenRule::Empty);
    let no_a1 = Pattern::any(2).with_x(1, LenRule::Empty);
    let mut rep = FormReport { second_slot_b: Vec::new(), first_slot_a: Vec::new() };
    for n in 1..=rm.order {
        rep.second_slot_b.push(project_component(rm.r.comp(n), &no_b2)?.len());
        rep.first_slot_a.push(project_component(rm.r.comp(n), &no_a1)?.len());
    }
    Ok(rep)
}

/// Residuals of the quasitriangularity identities, per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiReport {
    /// `J^{12} R^{12,3} (J^{12})^{-1} − R^{13} R^{23}`.
    pub first: Vec<usize>,
    /// `J^{23} R^{1,23} (J^{23})^{-1} − R^{13} R^{12}`.
    pub second: Vec<usize>,
    /// `J^{23} J^{1,23} Φ − J^{12} J^{12,3}`.
    pub twisted_associator: Vec<usize>,
    /// `[Φ^{1,2,3}, X^{123,4}]` for `X` the degree ≤ 2 part of `J`.
    pub phi_invariance: Vec<usize>,
}

impl QuasiReport {
    pub fn ok(&self) -> bool {
        self.first.iter().chain(&self.second).chain(&self.twisted_associator).chain(&self.phi_invariance).all(|&k| k == 0)
    }
}

fn counts(s: &USeries) -> Vec<usize> {
    s.comps().iter().map(|c| c.len()).collect()
}

pub fn check_quasitriangular(j: &USeries, rm: &RMatrix, phi: &Associator) -> Result<QuasiReport> {
    let order = rm.order.min(j.order()).min(phi.order);
    let j = j.truncate(order);
    let r = rm.r.truncate(order);
    let phi_u = mu_embed_series(&phi.phi.truncate(order));
    let j12 = j.place(&[1, 2], 3);
    let j23 = j.place(&[2, 3], 3);
    let r12 = r.place(&[1, 2], 3);
    let r13 = r.place(&[1, 3], 3);
    let r23 = r.place(&[2, 3], 3);
    let first = j12.mul(&ins(&r, &[&[1, 2], &[3]], 3)).mul(&inv(&j12)?).sub(&r13.mul(&r23));
    let second = j23.mul(&ins(&r, &[&[1], &[2, 3]], 3)).mul(&inv(&j23)?).sub(&r13.mul(&r12));
    let twisted = j23.mul(&ins(&j, &[&[1], &[2, 3]], 3)).mul(&phi_u).sub(&j12.mul(&ins(&j, &[&[1, 2], &[3]], 3)));
    let x = ins(&j.truncate(2.min(order)).with_order(order), &[&[1, 2, 3], &[4]], 4);
    let p4 = phi_u.place(&[1, 2, 3], 4);
    let comm = p4.mul(&x).sub(&x.mul(&p4));
    Ok(QuasiReport { first: counts(&first), second: counts(&second), twisted_associator: counts(&twisted), phi_invariance: counts(&comm) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::associator::{solve_associator, AssocOptions};

    #[test]
    fn dtilde_examples() {
        let one = USeries::one(2, 2);
        assert_eq!(dtilde(&one).unwrap(), USeries::one(3, 2));
        let mut j = USeries::one(2, 1);
        j.set_comp(1, make_r().scale(&Scalar::frac(-1, 2)));
        assert_eq!(dtilde(&j).unwrap(), USeries::one(3, 1));
    }

    #[test]
    fn gauge_examples() {
        let j = USeries::from_element(&UElement::one(2).add(&make_r()), 2);
        assert_eq!(gauge(&USeries::one(1, 2), &j).unwrap(), j);
        let alpha = Scalar::frac(1, 3);
        let u = USeries::from_element(&UElement::one(1).add(&make_mr().scale(&alpha)), 1);
        let g = gauge(&u, &USeries::one(2, 1)).unwrap();
        assert_eq!(g.to_element(), UElement::one(2).sub(&make_t().scale(&alpha)));
    }

    #[test]
    fn exp_shift_examples() {
        for (y, a) in [(UElement::one(2), Scalar::one()), (make_r(), Scalar::frac(1, 2)), (make_r(), Scalar::zero())] {
            assert!(exp_shift_identity_check(&y, &a, 3).unwrap().is_zero());
        }
    }

    #[test]
    fn r_matrix_low_order() {
        let mut j = USeries::one(2, 1);
        j.set_comp(1, make_r().scale(&Scalar::frac(-1, 2)));
        let rm = build_r(&j).unwrap();
        assert_eq!(rm.r.to_element(), UElement::one(2).add(&make_r()));
        assert!(check_qybe(&rm).ok());
        assert!(build_r(&USeries::one(2, 0)).unwrap().r.to_element() == UElement::one(2));
    }

    #[test]
    fn f_lambda_zero() {
        assert!(f_lambda(&UElement::zero(2)).is_zero());
    }

    #[test]
    fn f_lambda_matches_direct_change() {
        let phi = solve_associator(3, AssocOptions::default()).unwrap();
        let tw = solve_twist(&phi, 3).unwrap();
        let n = 3;
        let solver = coboundary_solver(n).unwrap();
        {
            let base = tw.j.truncate(n - 1).with_order(n);
            let before = dtilde(&base).unwrap();
            for lambda in crate::cohomology::wedge_basis(2, n - 1).iter() {
                let mut shifted = base.clone();
                let prev = shifted.comp(n - 1).add(lambda);
                shifted.set_comp(n - 1, prev);
                let after = dtilde(&shifted).unwrap();
                assert!(after.comp(n - 1).sub(before.comp(n - 1)).is_zero());
                assert_eq!(after.comp(n).sub(before.comp(n)), f_lambda(lambda));
                let third = big_bracket(&make_r(), lambda).scale(&Scalar::frac(1, 3));
                assert!(solver.solve_coboundary(&f_lambda(lambda).add(&third)).is_ok());
            }
        }
    }

    #[test]
    fn lambda_branch_is_exercised() {
        let phi = solve_associator(3, AssocOptions::default()).unwrap();
        let mut j = solve_twist(&phi, 3).unwrap().j;
        let lambda = crate::cohomology::wedge_basis(2, 2)[0].clone();
        let prev = j.comp(2).add(&lambda);
        j.set_comp(2, prev);
        let target = dtilde(&j).unwrap();
        let tw = solve_twist_for(&target).unwrap();
        assert!(tw.log.iter().any(|l| l.lambda_nonzero && !l.mu_zero));
        assert_eq!(dtilde(&tw.j).unwrap(), target);
    }

    #[test]
    fn twist_order_two() {
        let phi = solve_associator(2, AssocOptions::default()).unwrap();
        let tw = solve_twist(&phi, 2).unwrap();
        assert_eq!(tw.j.comp(1), &make_r().scale(&Scalar::frac(-1, 2)));
        assert!(tw.residual(&phi).unwrap().iter().all(|&k| k == 0));
    }
}
