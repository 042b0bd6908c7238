//! Acceptance suite: one line per criterion, exact residuals.
//!
//! Run with `cargo test -p cohoquant --test acceptance`. A line reads
//! `PASS`, `FAIL` or `FAIL (documented deviation: ...)`. The process exits
//! nonzero only for failures that are not on the documented list.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::thread;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cohoquant::artifact::{self, Artifact, Kind};
use cohoquant::associator::{solve_associator, t12_t23, AssocOptions};
use cohoquant::chord::chord_basis;
use cohoquant::cohomology::{cohomology_report, span_rank, wedge_partial, Complex};
use cohoquant::reports;
use cohoquant::selftest;
use cohoquant::specialize::{build_double, flatness_of, quantize, specialize_element, validate_bialgebra, LieBialgebra};
use cohoquant::twist::{build_r, check_form, check_quasitriangular, check_qybe, solve_twist};
use cohoquant::ualg::{diagram_basis, make_mr, make_r, mu_embed, t_ij, UElement};
use cohoquant::Scalar;

enum Verdict {
    Pass(String),
    Fail(String),
    Deviation(String),
}

struct Line {
    id: usize,
    title: &'static str,
    budget: Duration,
    verdict: Verdict,
    elapsed: Duration,
}

fn timed(id: usize, title: &'static str, budget_secs: u64, f: impl FnOnce() -> Verdict) -> Line {
    let t = Instant::now();
    let verdict = f();
    Line { id, title, budget: Duration::from_secs(budget_secs), verdict, elapsed: t.elapsed() }
}

fn sum(v: &[usize]) -> usize {
    v.iter().sum()
}

fn worked_product() -> Verdict {
    let c = selftest::worked_product();
    if c.ok {
        Verdict::Pass(c.detail)
    } else {
        Verdict::Fail(c.detail)
    }
}

fn chord_basis_claims() -> Verdict {
    let dims: Vec<usize> = (0..=6).map(|d| chord_basis(3, d).len()).collect();
    let dims_ok = dims.iter().enumerate().all(|(d, &n)| n == (1 << (d + 1)) - 1);
    let mut ranks = Vec::new();
    for d in 0..=3 {
        let images: Vec<UElement> =
            chord_basis(3, d).into_iter().map(|w| mu_embed(&cohoquant::chord::ChordElement::from_words(3, [(w, Scalar::one())]))).collect();
        ranks.push((span_rank(&images), images.len()));
    }
    let inj = ranks.iter().all(|(r, n)| r == n);
    let detail = format!("dims d<=6 {dims:?}; mu_3 rank/dim {ranks:?}");
    if dims_ok && inj {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

type Pair = (Vec<Vec<u8>>, Vec<Vec<u8>>);

/// Orbits of labeled slotted word pairs under simultaneous relabeling, by brute force.
fn orbit_count(n: usize, big_n: usize) -> usize {
    fn arrangements(tags: &[u8], n: usize) -> Vec<Vec<Vec<u8>>> {
        let mut out = Vec::new();
        let mut perm: Vec<Vec<u8>> = vec![Vec::new()];
        for _ in 0..tags.len() {
            let mut next = Vec::new();
            for p in &perm {
                for &t in tags {
                    if !p.contains(&t) {
                        let mut q = p.clone();
                        q.push(t);
                        next.push(q);
                    }
                }
            }
            perm = next;
        }
        for p in perm {
            let mut cuts = vec![Vec::new()];
            for _ in 1..n {
                cuts =
                    cuts.into_iter().flat_map(|c: Vec<usize>| (c.last().copied().unwrap_or(0)..=p.len()).map(move |x| [c.clone(), vec![x]].concat())).collect();
            }
            for c in cuts {
                let mut bounds = vec![0];
                bounds.extend(c);
                bounds.push(p.len());
                out.push(bounds.windows(2).map(|w| p[w[0]..w[1]].to_vec()).collect());
            }
        }
        out
    }
    let tags: Vec<u8> = (1..=big_n as u8).collect();
    let sides = arrangements(&tags, n);
    let perms: Vec<Vec<u8>> = arrangements(&tags, 1).into_iter().map(|mut w| w.remove(0)).collect();
    let mut seen: BTreeSet<Pair> = BTreeSet::new();
    for x in &sides {
        for y in &sides {
            let apply = |side: &Vec<Vec<u8>>, s: &Vec<u8>| side.iter().map(|w| w.iter().map(|&t| s[t as usize - 1]).collect()).collect::<Vec<Vec<u8>>>();
            let rep = perms.iter().map(|s| (apply(x, s), apply(y, s))).min().expect("nonempty");
            seen.insert(rep);
        }
    }
    seen.len()
}

fn universal_dimensions() -> Verdict {
    let binom = |n: usize, k: usize| (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
    let mut bad = Vec::new();
    let mut checked = 0;
    for n in 1..=3 {
        for big_n in 0..=4 {
            let formula = (1..=big_n).product::<usize>() * binom(big_n + n - 1, n - 1).pow(2);
            let oracle = orbit_count(n, big_n);
            let basis = diagram_basis(n, big_n).len();
            checked += 1;
            if formula != oracle || basis != oracle {
                bad.push((n, big_n, basis, oracle, formula));
            }
        }
    }
    if bad.is_empty() {
        Verdict::Pass(format!("{checked} (n, N) cases agree with the orbit oracle"))
    } else {
        Verdict::Fail(format!("(n, N, basis, oracle, formula) mismatches {bad:?}"))
    }
}

fn cohomology_claims() -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 1..=4 {
        match cohomology_report(Complex::Wedge, 2, n, false) {
            Ok(r) => {
                ok &= r.dim_cohomology == 0 && r.dim_kernel == 0;
                parts.push(format!("H2_{n}={} ker={}", r.dim_cohomology, r.dim_kernel));
            }
            Err(e) => return Verdict::Fail(e.to_string()),
        }
    }
    for n in 3..=4 {
        match cohomology_report(Complex::Wedge, 3, n, false) {
            Ok(r) => {
                ok &= r.dim_cohomology == 0;
                parts.push(format!("H3_{n}={}", r.dim_cohomology));
            }
            Err(e) => return Verdict::Fail(e.to_string()),
        }
    }
    let h32 = match cohomology_report(Complex::Wedge, 3, 2, false) {
        Ok(r) => r,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let z = mu_embed(&t12_t23());
    let lam = make_r().sub(&make_r().permute(&[2, 1]));
    let exact = wedge_partial(&lam).scale(&Scalar::from_int(3)) == z;
    parts.push(format!("H3_2={}", h32.dim_cohomology));
    let detail = parts.join(", ");
    if !ok {
        return Verdict::Fail(detail);
    }
    if h32.dim_cohomology == 1 {
        return Verdict::Pass(detail);
    }
    if h32.dim_cohomology == 0 && exact {
        return Verdict::Deviation(format!("{detail}; expected H3_2 = 1, but [t12,t23] = 3 d(r - r21) is exact"));
    }
    Verdict::Fail(detail)
}

fn centrality_and_invariance() -> Verdict {
    let mut central = 0;
    let mut invariant = 0;
    let mut count = 0;
    for n in 1..=3 {
        let m = (1..=n).map(|k| make_mr().place(&[k], n)).fold(UElement::zero(n), |a, b| a.add(&b));
        let mut parts = vec![vec![1, 2]];
        parts.extend((2..=n).map(|k| vec![k + 1]));
        let t = t_ij(n + 1, 1, 2);
        for big_n in 0..=3 {
            for d in diagram_basis(n, big_n) {
                let y = UElement::basis(d);
                central += m.commutator(&y).len();
                invariant += t.commutator(&y.insert(&parts, n + 1)).len();
                count += 1;
            }
        }
    }
    let detail = format!("{count} basis elements; centrality residual {central}, invariance residual {invariant}");
    if central + invariant == 0 {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn associator_claims() -> Verdict {
    let phi = match solve_associator(4, AssocOptions::default()) {
        Ok(p) => p,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let rep = match phi.verify() {
        Ok(r) => r,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let phi1 = phi.phi.comp(1).is_zero();
    let c = phi.phi2_coefficient();
    let flagged = solve_associator(2, AssocOptions { impose_alt_phi2: true, group_like: true });
    let detail = format!(
        "phi1 zero {phi1}; duality {:?} pentagon {:?} hexagon {:?}; c = {}; with Alt(phi2) = (1/8)[t12,t23] imposed: {}",
        rep.duality,
        rep.pentagon,
        rep.hexagon,
        c.as_ref().map_or("none".into(), |c| c.to_string()),
        match flagged {
            Ok(_) => "solvable".to_string(),
            Err(e) => e.to_string(),
        }
    );
    if phi1 && rep.ok() && c.is_some() {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn twist_claims() -> Verdict {
    let phi = match solve_associator(4, AssocOptions::default()) {
        Ok(p) => p,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let mut parts = Vec::new();
    let mut ok = true;
    for order in [3, 4] {
        let t = Instant::now();
        let sub = cohoquant::associator::Associator { order, phi: phi.phi.truncate(order) };
        let tw = match solve_twist(&sub, order) {
            Ok(tw) => tw,
            Err(e) => return Verdict::Fail(format!("order {order}: {e}")),
        };
        let residual = match tw.residual(&sub) {
            Ok(r) => r,
            Err(e) => return Verdict::Fail(e.to_string()),
        };
        let first = tw.j.comp(1).sub(&make_r().scale(&Scalar::frac(-1, 2))).len();
        let secs = t.elapsed().as_secs_f64();
        let budget = if order == 3 { 180.0 } else { 1800.0 };
        ok &= sum(&residual) == 0 && first == 0 && secs < budget;
        parts.push(format!("order {order}: coboundary residual {residual:?}, J1 + r/2 terms {first}, {secs:.2}s"));
    }
    if ok {
        Verdict::Pass(parts.join("; "))
    } else {
        Verdict::Fail(parts.join("; "))
    }
}

fn rmatrix_claims() -> Verdict {
    let run = || -> cohoquant::Result<(bool, String)> {
        let phi = solve_associator(3, AssocOptions::default())?;
        let tw = solve_twist(&phi, 3)?;
        let rm = build_r(&tw.j)?;
        let q = check_qybe(&rm);
        let f = check_form(&rm)?;
        let qt = check_quasitriangular(&tw.j, &rm, &phi)?;
        let detail = format!(
            "qybe {:?}, recursion {:?}, form {:?}/{:?}, quasi {:?}/{:?}, twisted associator {:?}",
            q.qybe, q.recursion, f.second_slot_b, f.first_slot_a, qt.first, qt.second, qt.twisted_associator
        );
        Ok((q.ok() && f.ok() && qt.ok(), detail))
    };
    match run() {
        Ok((true, d)) => Verdict::Pass(d),
        Ok((false, d)) => Verdict::Fail(d),
        Err(e) => Verdict::Fail(e.to_string()),
    }
}

fn specialization_claims() -> Verdict {
    let run = || -> cohoquant::Result<(bool, String)> {
        let b = LieBialgebra::borel();
        let valid = validate_bialgebra(&b);
        let d = build_double(&b)?;
        let mut rng = StdRng::seed_from_u64(7);
        let mut hom_failures = 0;
        let trials = 40;
        for _ in 0..trials {
            let slots = rng.gen_range(1..=2usize);
            let (pa, pb) = (rng.gen_range(0..=3usize), rng.gen_range(0..=3usize));
            let pick = |p: usize, rng: &mut StdRng| {
                let basis = diagram_basis(slots, p);
                let terms: Vec<_> = (0..3).map(|_| (basis[rng.gen_range(0..basis.len())].clone(), Scalar::from_int(rng.gen_range(-3..=3)))).collect();
                UElement::from_terms(slots, terms)
            };
            let x = pick(pa, &mut rng);
            let y = pick(pb, &mut rng);
            let k = pa + pb;
            let lhs = specialize_element(&x.mul(&y), &d, k);
            let rhs = d.mul(&specialize_element(&x, &d, k), &specialize_element(&y, &d, k));
            hom_failures += usize::from(lhs != rhs);
        }
        let phi = solve_associator(3, AssocOptions::default())?;
        let tw = solve_twist(&phi, 3)?;
        let (rep, q3) = quantize(&b, &tw.j, 3)?;
        let (_, q2) = quantize(&b, &tw.j, 2)?;
        let flat22 = flatness_of(&q2, 2);
        let flat32 = flatness_of(&q3, 2);
        let quant_ok = sum(&rep.coassociativity) + sum(&rep.qybe) + sum(&rep.quasi_first) + sum(&rep.quasi_second) + rep.flatness_hypothesis == 0;
        let limit_ok = rep.input_cobracket_limit == 0 && rep.cobracket_limit == 0;
        let detail = format!(
            "bialgebra valid {}; homomorphism failures {hom_failures}/{trials}; K=3 coassoc {:?} qybe {:?} quasi {:?}/{:?} hypothesis {}; flatness (2,2) ok {} (3,2) ok {}; linear cobracket residual {}",
            valid.ok(),
            rep.coassociativity,
            rep.qybe,
            rep.quasi_first,
            rep.quasi_second,
            rep.flatness_hypothesis,
            flat22.ok(),
            flat32.ok(),
            rep.input_cobracket_limit
        );
        Ok((valid.ok() && hom_failures == 0 && quant_ok && rep.ok() && flat22.ok() && flat32.ok() && limit_ok, detail))
    };
    match run() {
        Ok((true, d)) => Verdict::Pass(d),
        Ok((false, d)) => Verdict::Fail(d),
        Err(e) => Verdict::Fail(e.to_string()),
    }
}

/// Every artifact the pipeline writes, as text.
fn pipeline() -> cohoquant::Result<Vec<String>> {
    let phi = solve_associator(3, AssocOptions::default())?;
    let tw = solve_twist(&phi, 3)?;
    let rm = build_r(&tw.j)?;
    let b = LieBialgebra::borel();
    let (rep, q) = quantize(&b, &tw.j, 2)?;
    let flat = flatness_of(&q, 2);
    Ok(vec![
        Artifact::new(Kind::Associator, artifact::encode_associator(&phi)).to_text(),
        Artifact::new(Kind::Twist, artifact::encode_twist(&tw, &phi)).to_text(),
        Artifact::new(Kind::RMatrix, artifact::encode_rmatrix(&rm)).to_text(),
        Artifact::new(Kind::Bialgebra, artifact::encode_bialgebra(&b)).to_text(),
        reports::twist(&tw, &tw.residual(&phi)?).to_text(),
        reports::quantize(&q, &rep, &flat).to_text(),
    ])
}

fn determinism() -> Verdict {
    let a = thread::spawn(pipeline).join().expect("pipeline thread");
    let b = thread::spawn(pipeline).join().expect("pipeline thread");
    match (a, b) {
        (Ok(a), Ok(b)) => {
            let bytes: usize = a.iter().map(String::len).sum();
            if a == b {
                Verdict::Pass(format!("{} artifacts, {bytes} bytes identical", a.len()))
            } else {
                Verdict::Fail("runs differ".into())
            }
        }
        (Err(e), _) | (_, Err(e)) => Verdict::Fail(e.to_string()),
    }
}

fn main() -> ExitCode {
    let lines = vec![
        timed(1, "worked product example", 1, worked_product),
        timed(2, "chord basis dimensions and injectivity", 30, chord_basis_claims),
        timed(3, "universal dimensions against orbit enumeration", 60, universal_dimensions),
        timed(4, "wedge-complex cohomology", 300, cohomology_claims),
        timed(5, "centrality and invariance on full bases", 120, centrality_and_invariance),
        timed(6, "associator through degree 4", 120, associator_claims),
        timed(7, "twist through degree 4", 1800, twist_claims),
        timed(8, "R-matrix through degree 3", 600, rmatrix_claims),
        timed(9, "specialization, quantization and flatness", 600, specialization_claims),
        timed(10, "determinism of the pipeline", 600, determinism),
    ];
    let mut undocumented = 0;
    for l in &lines {
        let over = l.elapsed > l.budget;
        let time = format!("{:.2}s of {}s", l.elapsed.as_secs_f64(), l.budget.as_secs());
        let (status, detail) = match &l.verdict {
            Verdict::Pass(d) if !over => ("PASS".to_string(), d.clone()),
            Verdict::Pass(d) => ("FAIL (over time budget)".to_string(), d.clone()),
            Verdict::Fail(d) => ("FAIL".to_string(), d.clone()),
            Verdict::Deviation(d) => ("FAIL (documented deviation)".to_string(), d.clone()),
        };
        if status == "FAIL" || status.starts_with("FAIL (over") {
            undocumented += 1;
        }
        println!("criterion {:>2} {status}: {} [{time}] {detail}", l.id, l.title);
    }
    if undocumented == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
