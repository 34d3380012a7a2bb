//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.

mod common;

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{c, order2_case};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schur_bp::psd::hermitian_test;
use schur_bp::structured::{build_extended_entries, build_p, build_p_matrix, check_unitary_identity};
use schur_bp::verifier::{boundary_sp_limit, jet_problem, random_blaschke_problem, supnorm_disk, verify_asymptotics};
use schur_bp::{
    build_lft, classify, classify_order1, classify_order2, lft_apply, reduce_problem, solve, synth_determinate,
    AnalyticFunction, BoundaryJet, CMatrix, CaseTag, Complex64, Verdict,
};

const TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn real(s: &[f64]) -> BoundaryJet {
    BoundaryJet::new(c(1.0, 0.0), s.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
}

fn fail(msg: impl Into<String>) -> Outcome {
    Err(msg.into())
}

/// 128 deterministic points spread over `|z| <= 0.99`.
fn disk_samples() -> Vec<Complex64> {
    (0..128)
        .map(|k| Complex64::from_polar(0.99 * ((k as f64 + 0.5) / 128.0).sqrt(), 2.399_963 * k as f64))
        .collect()
}

fn max_gap(f: &AnalyticFunction, g: &AnalyticFunction) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for z in disk_samples() {
        let a = f.eval(z).map_err(|e| e.to_string())?;
        let b = g.eval(z).map_err(|e| e.to_string())?;
        worst = worst.max((a - b).norm());
    }
    Ok(worst)
}

fn unimodular<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))
}

fn identity_example() -> Outcome {
    let start = Instant::now();
    let data = real(&[1.0, 1.0, 0.0, 0.0]);
    let cls = classify(&data, TOL);
    if cls.verdict != Verdict::Unique || cls.n != 2 || cls.rank != Some(1) {
        return fail(format!("got {} n={} rank={:?}", cls.case_tag, cls.n, cls.rank));
    }
    let p1 = build_p(&data, 1).map_err(|e| e.to_string())?.p;
    let p2 = build_p(&data, 2).map_err(|e| e.to_string())?.p;
    let want2 = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    if p1 != CMatrix::from_element(1, 1, c(1.0, 0.0)) || p2 != want2 {
        return fail(format!("P_1 = {p1}, P_2 = {p2}"));
    }
    let set = solve(&data, 4, TOL).map_err(|e| e.to_string())?;
    let [f] = set.functions.as_slice() else {
        return fail(format!("{} solutions", set.functions.len()));
    };
    let id = AnalyticFunction::polynomial(c(0.0, 0.0), vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let gap = max_gap(f, &id)?;
    let elapsed = start.elapsed();
    if gap > 1e-9 {
        return fail(format!("|f(z) - z| = {gap:e}"));
    }
    if elapsed >= Duration::from_millis(100) {
        return fail(format!("runtime {elapsed:?}"));
    }
    Ok(format!("unique, rank 1, |f(z) - z| <= {gap:.1e}"))
}

fn order1_trichotomy() -> Outcome {
    let pairs = [
        (c(1.0, 0.0), c(1.0, 0.0)),
        (c(0.0, 1.0), c(1.0, 0.0)),
        (
            Complex64::from_polar(1.0, TAU / 8.0),
            Complex64::from_polar(1.0, -TAU / 6.0),
        ),
    ];
    let mut counts = [0usize; 3];
    for (t0, s0) in pairs {
        for r in [0.0, 0.5, 1.0] {
            for k in 0..24 {
                let s1 = Complex64::from_polar(r, TAU * k as f64 / 24.0);
                let data = BoundaryJet::new(t0, vec![s0, s1]).unwrap();
                let got = classify(&data, TOL);
                let want = classify_order1(t0, s0, s1, TOL);
                if got.case_tag != want.case_tag {
                    return fail(format!("t0={t0} s1={s1}: {} vs {}", got.case_tag, want.case_tag));
                }
                match got.verdict {
                    Verdict::Unique => {
                        counts[0] += 1;
                        let set = solve(&data, 3, TOL).map_err(|e| e.to_string())?;
                        match set.functions.as_slice() {
                            [AnalyticFunction::Constant(v)] if (v - s0).norm() <= 1e-15 => {}
                            other => return fail(format!("unique case gave {other:?}")),
                        }
                    }
                    Verdict::Infinite => counts[1] += 1,
                    Verdict::NoSolution => counts[2] += 1,
                }
            }
        }
    }
    if counts.contains(&0) {
        return fail(format!("branch not exercised: {counts:?}"));
    }
    Ok(format!(
        "216 cases agree (unique {}, infinite {}, none {})",
        counts[0], counts[1], counts[2]
    ))
}

fn order2_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..10_000 {
        let (t0, s0, s1, s2) = order2_case(&mut rng);
        let got = classify(&BoundaryJet::new(t0, vec![s0, s1, s2]).unwrap(), TOL);
        let want = classify_order2(t0, s0, s1, s2, TOL);
        if got.verdict != want.verdict {
            return fail(format!(
                "case {i}: {t0} {s0} {s1} {s2}: {} vs {}",
                got.case_tag, want.case_tag
            ));
        }
    }
    Ok("10000 cases agree".into())
}

fn coefficient_matrix_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for case in 0..200 {
        let degree = rng.gen_range(1..=5);
        let n = rng.gen_range(1..=degree);
        let t0 = unimodular(&mut rng);
        let (data, _) = random_blaschke_problem(degree, t0, 2 * n - 1, rng.gen()).map_err(|e| e.to_string())?;
        let s = build_lft(&data, n, TOL).map_err(|e| format!("case {case}: {e}"))?;
        let [a, b, cc, d] = s.entry_jets(data.t0(), 2 * n).map_err(|e| e.to_string())?;
        let scale = data.scale();
        let mut err = (0..2 * n)
            .map(|j| (a.coeff(j) - data.coeff(j)).norm() / scale)
            .fold(0.0, f64::max);
        let bc_scale = b.max_abs().max(cc.max_abs()).max(1.0);
        for j in 0..n {
            err = err.max(b.coeff(j).norm() / bc_scale).max(cc.coeff(j).norm() / bc_scale);
        }
        let d0 = d.coeff(0);
        err = err.max((d0.norm() - 1.0).abs());
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let lhs = data.t0().powu(2 * n as u32) * b.coeff(n);
        let rhs = cc.coeff(n).conj() * d0 * data.coeff(0) * sign;
        err = err.max((lhs - rhs).norm() / lhs.norm().max(1.0));
        if err > 1e-8 {
            return fail(format!("case {case} (degree {degree}, n {n}): error {err:e}"));
        }
        worst = worst.max(err);
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(10) {
        return fail(format!("runtime {elapsed:?}"));
    }
    Ok(format!("200 cases, worst relative error {worst:.1e}"))
}

fn reduced_value_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut done, mut worst, mut sign_checks) = (0, 0.0f64, 0);
    while done < 200 {
        let n = rng.gen_range(1..=3);
        let degree = n + rng.gen_range(0..3);
        let t0 = unimodular(&mut rng);
        let (data, _) = random_blaschke_problem(degree, t0, 2 * n - 1, rng.gen()).map_err(|e| e.to_string())?;
        let mut coeffs = data.s().to_vec();
        coeffs.push(c(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0)));
        let data = BoundaryJet::new(data.t0(), coeffs).unwrap();
        let s = build_lft(&data, n, TOL).map_err(|e| e.to_string())?;
        let red = reduce_problem(&data, n, &s, TOL).map_err(|e| e.to_string())?;
        if !red.analytic {
            continue;
        }
        done += 1;
        let u = build_extended_entries(&data, n).map_err(|e| e.to_string())?;
        let rhs = red.u_from_r0();
        let rel = (u.u - rhs).abs() / u.u.abs().max(rhs.abs()).max(1.0);
        if rel > 1e-8 {
            return fail(format!("instance {done}: u = {} vs {rhs} (relative {rel:e})", u.u));
        }
        worst = worst.max(rel);
        if u.u.abs() > TOL * u.u_scale {
            sign_checks += 1;
            if (u.u > 0.0) != (red.r0.norm() < 1.0) {
                return fail(format!(
                    "instance {done}: sign(u) disagrees with |R_0| = {}",
                    red.r0.norm()
                ));
            }
        }
    }
    Ok(format!(
        "200 instances, worst relative error {worst:.1e}, {sign_checks} sign checks"
    ))
}

fn determinate_recovery() -> Outcome {
    let data = real(&[1.0, 3.0, 3.0, 3.0]);
    let cls = classify(&data, TOL);
    let f = synth_determinate(&data, &cls).map_err(|e| e.to_string())?;
    let want = AnalyticFunction::blaschke(c(1.0, 0.0), vec![c(0.5, 0.0)]).unwrap();
    let gap = max_gap(&f, &want)?;
    if cls.verdict != Verdict::Unique || gap > 1e-8 {
        return fail(format!("(1,3,3,3): {} gap {gap:e}", cls.case_tag));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst, mut worst_cond) = (gap, 1.0f64);
    for case in 0..100 {
        let degree = rng.gen_range(0..=4);
        let n = degree + 1;
        let big_n = if rng.gen() { 2 * n } else { 2 * n - 1 };
        let t0 = unimodular(&mut rng);
        let (data, g) = random_blaschke_problem(degree, t0, big_n, rng.gen()).map_err(|e| e.to_string())?;
        let cls = classify(&data, TOL);
        if cls.verdict != Verdict::Unique || cls.rank != Some(degree) {
            return fail(format!(
                "case {case}: {} rank {:?}, want unique rank {degree}",
                cls.case_tag, cls.rank
            ));
        }
        let f = synth_determinate(&data, &cls).map_err(|e| format!("case {case}: {e}"))?;
        let gap = max_gap(&f, &g)?;
        let cond = if degree == 0 {
            1.0
        } else {
            let eigs = build_p_matrix(&data, degree)
                .map_err(|e| e.to_string())?
                .symmetric_eigenvalues();
            eigs.max() / eigs.min()
        };
        if gap > 1e-8 {
            return fail(format!(
                "case {case} (degree {degree}, N {big_n}, cond P_d {cond:.1e}): gap {gap:e}"
            ));
        }
        worst = worst.max(gap);
        worst_cond = worst_cond.max(cond);
    }
    Ok(format!(
        "101 cases, worst gap {worst:.1e}, largest cond P_d {worst_cond:.1e}"
    ))
}

fn boundary_schwarz_pick() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for case in 0..50 {
        let degree = rng.gen_range(1..=5);
        let t0 = unimodular(&mut rng);
        let seed = rng.gen();
        for n in 1..=3 {
            let (data, f) = random_blaschke_problem(degree, t0, 2 * n - 1, seed).map_err(|e| e.to_string())?;
            let lim = boundary_sp_limit(&f, data.t0(), n, 40).map_err(|e| e.to_string())?;
            let p = build_p_matrix(&data, n).map_err(|e| e.to_string())?;
            let err = (&lim.matrix - &p).iter().map(|x| x.norm()).fold(0.0, f64::max) / lim.scale;
            if err > 1e-6 {
                return fail(format!("case {case} (degree {degree}, n {n}): error {err:e}"));
            }
            worst = worst.max(err);
        }
    }
    Ok(format!("50 products x n = 1..3, worst relative error {worst:.1e}"))
}

fn symmetry_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut worst_in, mut least_out) = (0.0f64, f64::INFINITY);
    for case in 0..100 {
        let degree = rng.gen_range(1..=5);
        let n = rng.gen_range(1..=3);
        let t0 = unimodular(&mut rng);
        let (data, _) = random_blaschke_problem(degree, t0, 2 * n - 1, rng.gen()).map_err(|e| e.to_string())?;
        let chk = check_unitary_identity(&data, n).map_err(|e| e.to_string())?;
        let rel = chk.residual / chk.scale;
        if rel >= 1e-9 {
            return fail(format!("Hermitian case {case}: residual {rel:e}"));
        }
        worst_in = worst_in.max(rel);

        // Perturb one coefficient until P_n stops being Hermitian.
        let perturbed = loop {
            let mut s = data.s().to_vec();
            let j = rng.gen_range(1..2 * n);
            let size = 0.1 * s[j].norm().max(1.0);
            s[j] += Complex64::from_polar(size, rng.gen_range(0.0..TAU));
            let d = data.with_coeffs(s).map_err(|e| e.to_string())?;
            let p = build_p_matrix(&d, n).map_err(|e| e.to_string())?;
            if !hermitian_test(&p, TOL).0 {
                break d;
            }
        };
        let chk = check_unitary_identity(&perturbed, n).map_err(|e| e.to_string())?;
        let rel = chk.residual / chk.scale;
        if rel <= 1e-3 {
            return fail(format!("perturbed case {case}: residual {rel:e}"));
        }
        least_out = least_out.min(rel);
    }
    Ok(format!(
        "Hermitian residual <= {worst_in:.1e}, perturbed residual >= {least_out:.1e}"
    ))
}

/// Degree-2 Blaschke data `s_0..s_3` continued by `T_S[0.3 + 0.2i]` to order 5.
fn deep_problem() -> Result<BoundaryJet, String> {
    let t0 = Complex64::from_polar(1.0, 0.4);
    let (data, _) = random_blaschke_problem(2, t0, 3, 11).map_err(|e| e.to_string())?;
    let s = Arc::new(build_lft(&data, 2, TOL).map_err(|e| e.to_string())?);
    let f = lft_apply(&s, AnalyticFunction::Constant(c(0.3, 0.2)));
    jet_problem(&f, data.t0(), 5).map_err(|e| e.to_string())
}

fn indeterminate_pipeline() -> Outcome {
    // (data, expected tag, expected sign of u: 1, 0, or none)
    let cases = [
        (real(&[1.0, 3.0, 9.0]), CaseTag::InfiniteEvenUGe0, Some(1)),
        (real(&[1.0, 3.0, 3.0]), CaseTag::InfiniteEvenUGe0, Some(0)),
        (real(&[1.0, 3.0]), CaseTag::InfiniteMaximal, None),
        (deep_problem()?, CaseTag::InfiniteMidUGt0, Some(1)),
    ];
    let mut lines = Vec::new();
    for (data, tag, u_sign) in cases {
        let start = Instant::now();
        let set = solve(&data, 5, TOL).map_err(|e| e.to_string())?;
        let cls = &set.classification;
        let label = format!("N={} {}", data.order(), cls.case_tag);
        if cls.case_tag != tag {
            return fail(format!("{label}: expected {tag}"));
        }
        let u_sign_got = cls.u.map(|u| {
            if u.abs() <= TOL * data.scale() {
                0
            } else {
                u.signum() as i32
            }
        });
        if u_sign_got != u_sign {
            return fail(format!("{label}: u = {:?}", cls.u));
        }
        if set.functions.len() < 3 {
            return fail(format!("{label}: only {} solutions", set.functions.len()));
        }
        for (i, f) in set.functions.iter().enumerate() {
            for g in &set.functions[..i] {
                if max_gap(f, g)? < 1e-6 {
                    return fail(format!("{label}: solutions {i} repeats an earlier one"));
                }
            }
            let rep = verify_asymptotics(f, &data, 40, true).map_err(|e| e.to_string())?;
            let sup = supnorm_disk(f, 1024).map_err(|e| e.to_string())?;
            if !rep.passed || sup > 1.0 + 1e-8 {
                return fail(format!("{label}: solution {i}: {} sup {sup}", rep.details));
            }
        }
        let elapsed = start.elapsed();
        if elapsed >= Duration::from_secs(5) {
            return fail(format!("{label}: runtime {elapsed:?}"));
        }
        lines.push(format!(
            "{label} u={:.1e}: {}",
            cls.u.unwrap_or(f64::NAN),
            set.functions.len()
        ));
    }
    Ok(lines.join("; "))
}

fn no_solution_gates() -> Outcome {
    let cases = [
        (&[1.0, 3.0, 3.0, 5.0][..], CaseTag::NoneNotPsd),
        (&[1.0, 3.0, -3.0][..], CaseTag::NoneUNegative),
        (&[1.0, -0.5][..], CaseTag::NoneN0),
    ];
    for (s, tag) in cases {
        let set = solve(&real(s), 4, TOL).map_err(|e| e.to_string())?;
        let cls = &set.classification;
        if cls.verdict != Verdict::NoSolution || cls.case_tag != tag || !set.functions.is_empty() {
            return fail(format!(
                "{s:?}: {} with {} functions, want {tag}",
                cls.case_tag,
                set.functions.len()
            ));
        }
    }
    Ok("none_not_psd, none_u_negative, none_n0".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("example (1,1,0,0) reproduction", identity_example),
        ("order-1 trichotomy sweep", order1_trichotomy),
        ("N = 2 oracle", order2_oracle),
        ("coefficient matrix suite", coefficient_matrix_suite),
        ("reduced value identity", reduced_value_identity),
        ("determinate recovery", determinate_recovery),
        ("boundary Schwarz-Pick equality", boundary_schwarz_pick),
        ("symmetry identity", symmetry_identity),
        ("indeterminate pipeline", indeterminate_pipeline),
        ("no-solution gates", no_solution_gates),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name} ({secs:.2}s): {msg}", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
