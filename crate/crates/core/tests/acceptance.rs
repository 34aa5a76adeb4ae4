//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use powerspec::graph::{connected_graphs_up_to, connected_subgraph_census, power_hypergraph};
use powerspec::mean::{amgm_check, geometric_mean_evaluate, matching_polynomial, CheckStatus, MatchingMethod};
use powerspec::poly::IntPolynomial;
use powerspec::signed::{char_poly_exact, spectral_radius, SignedGraph, DEFAULT_SIGMA_TOL};
use powerspec::spectrum::{
    beta, beta_radius_exponent, char_poly_power, limit_diagnostic, radius_cross_check, script_s,
    total_degree, DEFAULT_PRECISION_BITS,
};
use powerspec::tensor::{
    eulerian_digraphs_on, eulerian_walk_count, naive_tensor_trace, spanning_tree_reduction_check,
    EulerianMethod, Multidigraph,
};
use powerspec::verify::SAMPLE_POINTS;
use powerspec::walks::{covering_parity_closed_count, parity_closed_count, CoveringMethod, ParityMethod};
use powerspec::{Budget, Graph};

type Outcome = Result<String, String>;

fn corpus() -> Vec<Graph> {
    connected_graphs_up_to(5, &Budget::default()).expect("corpus")
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>, ctx: impl std::fmt::Display) -> Result<T, String> {
    r.map_err(|err| format!("{ctx}: {err}"))
}

fn criterion_1() -> Outcome {
    let b = Budget::default();
    let start = Instant::now();
    let mut cases = 0;
    for g in corpus() {
        for d in 0..=10 {
            let dp = e(parity_closed_count(&g, d, ParityMethod::Dp, &b), &g)?;
            let sm = e(parity_closed_count(&g, d, ParityMethod::SignedMean, &b), &g)?;
            ensure(dp == sm, || format!("{g:?} d={d}: dp {} vs signed mean {}", dp.value, sm.value))?;
            cases += 1;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}, limit 60 s"))?;
    Ok(format!("{cases} (graph, d) pairs agree in {t:.1?}"))
}

fn criterion_2() -> Outcome {
    let b = Budget::default();
    let mut cases = 0;
    for g in corpus() {
        let census = e(connected_subgraph_census(&g, g.edge_count().min(5), &b), &g)?;
        for d in 1..=10 {
            let lhs = e(parity_closed_count(&g, d, ParityMethod::Dp, &b), &g)?.value;
            let mut rhs = BigUint::zero();
            for entry in &census.entries {
                let p = e(covering_parity_closed_count(&entry.motif.graph, d, CoveringMethod::Dp, &b), &g)?;
                rhs += p.value * BigUint::from(entry.count);
            }
            ensure(lhs == rhs, || format!("{g:?} d={d}: P_d {lhs} vs {rhs}"))?;
            cases += 1;
        }
    }
    Ok(format!("P_d = Σ p_d N on {cases} (graph, d) pairs"))
}

fn criterion_3() -> Outcome {
    let b = Budget::default();
    let mut cases = 0;
    for g in corpus() {
        let a = e(matching_polynomial(&g, MatchingMethod::Direct, &b), &g)?;
        let s = e(matching_polynomial(&g, MatchingMethod::SignedMean, &b), &g)?;
        ensure(a == s, || format!("{g:?}: {a} vs {s}"))?;
        cases += 1;
    }
    let c3 = e(matching_polynomial(&Graph::cycle(3).unwrap(), MatchingMethod::Direct, &b), "C3")?;
    ensure(c3 == IntPolynomial::from_i64(&[0, -3, 0, 1]).to_rational(), || format!("C3 gives {c3}"))?;
    Ok(format!("{cases} graphs coefficient-exact, C3 = {c3}"))
}

/// All Eulerian multi-digraphs on corpus motifs with at most 4 vertices
/// and 10 arcs.
fn corpus_digraphs() -> Result<Vec<Multidigraph>, String> {
    let b = Budget::default();
    let mut out = Vec::new();
    for n in 2..=4 {
        for motif in e(connected_graphs_up_to(n, &b), "motifs")? {
            if motif.vertex_count() == n {
                out.extend(e(eulerian_digraphs_on(&motif, 10, &b), &motif)?);
            }
        }
    }
    Ok(out)
}

fn criterion_4() -> Outcome {
    let b = Budget::default();
    let two = Multidigraph::from_arcs(2, [((0, 1), 1), ((1, 0), 1)]).unwrap();
    let tri = Multidigraph::from_arcs(3, [((0, 1), 1), ((1, 2), 1), ((2, 0), 1)]).unwrap();
    let w2 = e(eulerian_walk_count(&two, EulerianMethod::Best, &b), "2-cycle")?;
    let w3 = e(eulerian_walk_count(&tri, EulerianMethod::Best, &b), "triangle")?;
    ensure(w2 == BigUint::from(2u32) && w3 == BigUint::from(3u32), || format!("2-cycle {w2}, triangle {w3}"))?;
    let digraphs = corpus_digraphs()?;
    for d in &digraphs {
        let best = e(eulerian_walk_count(d, EulerianMethod::Best, &b), "best")?;
        let brute = e(eulerian_walk_count(d, EulerianMethod::Brute, &b), "brute")?;
        ensure(best == brute, || format!("{}: BEST {best} vs brute {brute}", d.to_json()))?;
    }
    Ok(format!("{} digraphs agree; 2-cycle = {w2}, directed triangle = {w3}", digraphs.len()))
}

fn criterion_5() -> Outcome {
    let mut cases = 0;
    for d in corpus_digraphs()?.iter().filter(|d| d.has_even_edge_totals()) {
        for k in 3..=5 {
            let r = e(spanning_tree_reduction_check(d, k), d.to_json())?;
            ensure(r.holds, || format!("{} k={k}: {} vs {}", d.to_json(), r.direct, r.reduced))?;
            cases += 1;
        }
    }
    Ok(format!("t(D) matches the reduction on {cases} lifts"))
}

fn criterion_6() -> Outcome {
    let b = Budget::default();
    let start = Instant::now();
    let k2 = Graph::path(2);
    let h = e(power_hypergraph(&k2, 3), "K2")?;
    let mut values = Vec::new();
    for d in 1..=6 {
        let naive = e(naive_tensor_trace(&h, d, &b), "naive")?;
        let closed = e(script_s(&k2, d, 3, &b), "closed form")?;
        ensure(naive == closed, || format!("K2 d={d}: {naive} vs {closed}"))?;
        values.push(naive.to_string());
    }
    ensure(values == ["0", "0", "9", "0", "0", "9"], || format!("K2 values {values:?}"))?;
    let p3 = Graph::path(3);
    let h = e(power_hypergraph(&p3, 3), "path:3")?;
    let mut p3_values = Vec::new();
    for d in [3, 6] {
        let naive = e(naive_tensor_trace(&h, d, &b), "naive")?;
        let closed = e(script_s(&p3, d, 3, &b), "closed form")?;
        ensure(naive == closed, || format!("path:3 d={d}: {naive} vs {closed}"))?;
        p3_values.push(naive.to_string());
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(600), || format!("took {t:?}"))?;
    Ok(format!("K2: {} ; path:3 at d=3,6: {} ({t:.1?})", values.join(","), p3_values.join(",")))
}

fn criterion_7() -> Outcome {
    let b = Budget::default();
    let k2 = Graph::path(2);
    let f = e(char_poly_power(&k2, 3, DEFAULT_SIGMA_TOL, DEFAULT_PRECISION_BITS, &b), "K2")?;
    ensure(f.to_string() == "λ^3 (λ^3 − 1)^3" && f.mu0 == int(3), || format!("K2, k=3: {f}"))?;
    for k in 3..=5usize {
        let f = e(char_poly_power(&k2, k, DEFAULT_SIGMA_TOL, DEFAULT_PRECISION_BITS, &b), "K2")?;
        let want = int((k as i64).pow(k as u32 - 2));
        ensure(f.factors.len() == 1 && f.factors[0].mu == want, || format!("K2 k={k}: {f}"))?;
    }
    let mut worst = 0.0f64;
    let mut count = 0;
    for g in corpus() {
        for k in [3usize, 4, 5] {
            let f = e(char_poly_power(&g, k, DEFAULT_SIGMA_TOL, DEFAULT_PRECISION_BITS, &b), format!("{g:?} k={k}"))?;
            let r = f.factors.iter().map(|x| x.residual).fold(0.0, f64::max);
            worst = worst.max(r);
            ensure(r <= 1e-6 && f.all_nonnegative(), || format!("{g:?} k={k}: residual {r:e}, {f}"))?;
            ensure(f.factors.iter().all(|x| x.mu.is_integer()) && f.mu0.is_integer(), || format!("{g:?} k={k}: fractional"))?;
            if k == 3 {
                let sum: BigRational = f.factors.iter().map(|x| x.mu.clone()).sum();
                ensure(
                    &f.mu0 + sum * BigInt::from(3) == BigRational::from_integer(total_degree(&g, 3)),
                    || format!("{g:?}: total degree identity fails"),
                )?;
            }
            count += 1;
        }
    }
    Ok(format!("λ^3 (λ^3 − 1)^3; μ_1(K2,k) = k^(k-2); {count} solves integral, worst residual {worst:.1e}"))
}

fn criterion_8() -> Outcome {
    let b = Budget::default();
    let mut count = 0;
    for g in corpus() {
        for k in [3usize, 4] {
            let f = e(char_poly_power(&g, k, DEFAULT_SIGMA_TOL, DEFAULT_PRECISION_BITS, &b), format!("{g:?}"))?;
            let r = e(radius_cross_check(&g, k, &f), format!("{g:?}"))?;
            ensure(r.holds, || format!("{g:?} k={k}: formula {} vs pipeline {:?}", r.formula, r.pipeline))?;
            count += 1;
        }
    }
    let c3 = Graph::cycle(3).unwrap();
    let f = e(char_poly_power(&c3, 3, DEFAULT_SIGMA_TOL, DEFAULT_PRECISION_BITS, &b), "C3")?;
    let r = e(radius_cross_check(&c3, 3, &f), "C3")?;
    ensure(r.formula == BigUint::from(9u32) && r.holds, || format!("C3: {r:?}"))?;
    Ok(format!("{count} (graph, k) cases match; C3, k=3 -> {}", r.formula))
}

fn criterion_9() -> Outcome {
    let b = Budget::default();
    let c3 = Graph::cycle(3).unwrap();
    let f = e(beta(&c3, DEFAULT_SIGMA_TOL, DEFAULT_PRECISION_BITS, &b), "C3")?;
    let nz: Vec<_> = f.nonzero_factors().map(|x| (x.sigma_sq, x.mu.to_string())).collect();
    ensure(
        nz.len() == 2 && nz[0].0 == 1.0 && nz[0].1 == "1" && nz[1].0 == 4.0 && nz[1].1 == "1/2" && f.mu0.is_zero(),
        || format!("C3: {f}"),
    )?;
    let mut points = 0;
    for g in corpus() {
        let f = e(beta(&g, DEFAULT_SIGMA_TOL, DEFAULT_PRECISION_BITS, &b), format!("{g:?}"))?;
        ensure(f.is_polynomial() == g.is_forest(), || format!("{g:?}: β = {f}"))?;
        let rho = e(spectral_radius(&g, 1e-12), "radius")?;
        let got = f.factor_at(rho * rho).map(|x| x.mu.clone());
        ensure(got == Some(beta_radius_exponent(&g)), || format!("{g:?}: exponent at ρ² {got:?}"))?;
        for &x in &SAMPLE_POINTS {
            let gm = e(geometric_mean_evaluate(&g, x, &b), "geometric mean")?;
            let bv = f.evaluate_abs(x);
            ensure((gm - bv).abs() <= 1e-9 * bv.max(1.0), || format!("{g:?} at {x}: {gm} vs {bv}"))?;
            points += 1;
        }
    }
    for n in 3..=6 {
        let c = Graph::cycle(n).unwrap();
        let f = e(beta(&c, DEFAULT_SIGMA_TOL, DEFAULT_PRECISION_BITS, &b), "cycle")?;
        let phi = e(char_poly_exact(&SignedGraph::all_positive(c)), "cycle")?;
        for &x in &SAMPLE_POINTS {
            let rhs = phi.eval_f64(x * x - 2.0);
            let lhs = f.evaluate_squared(x).ok_or_else(|| format!("C{n}: fractional doubled exponent"))?;
            ensure((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0), || format!("C{n} at {x}: {lhs} vs {rhs}"))?;
        }
    }
    Ok(format!("C3: {f}; forest iff polynomial; ρ² exponents; {points} geometric-mean points; cycles 3..6"))
}

fn criterion_10() -> Outcome {
    let b = Budget::default();
    let c3 = Graph::cycle(3).unwrap();
    let r = e(amgm_check(&c3, 3.0, &b), "C3")?;
    let want_beta = 8.0 * 5f64.sqrt();
    ensure(
        r.status == CheckStatus::Pass
            && r.alpha == 18.0
            && r.beta.is_some_and(|x| (x - want_beta).abs() < 1e-9)
            && !r.equality,
        || format!("C3 at 3: {r:?}"),
    )?;
    let mut forests = 0;
    for g in corpus().into_iter().filter(Graph::is_forest) {
        let mut applicable = 0;
        for &x in &SAMPLE_POINTS {
            let r = e(amgm_check(&g, x, &b), format!("{g:?}"))?;
            match r.status {
                CheckStatus::Pass => {
                    ensure(r.equality, || format!("{g:?} at {x}: strict on a forest"))?;
                    applicable += 1;
                }
                CheckStatus::Skipped => {}
                CheckStatus::Fail => return Err(format!("{g:?} at {x}: {}", r.detail)),
            }
        }
        ensure(applicable > 0, || format!("{g:?}: no sample point meets the precondition"))?;
        forests += 1;
    }
    Ok(format!("C3: α(3) = {} > β(3) = {:.10}; equality on {forests} forests", r.alpha, r.beta.unwrap()))
}

fn criterion_11() -> Outcome {
    let b = Budget::default();
    let mut parts = Vec::new();
    for (name, g) in [("K2", Graph::path(2)), ("path:3", Graph::path(3)), ("cycle:3", Graph::cycle(3).unwrap())] {
        let d = e(limit_diagnostic(&g, 3, 30, &b), name)?;
        let gap = d.relative_gap();
        let last = d.ratios.last().map(|&(_, r)| r).unwrap_or(f64::NAN);
        ensure(gap <= 0.05, || format!("{name}: ratio {last} vs n_ρ {} ({:.2}%)", d.n_rho, 100.0 * gap))?;
        parts.push(format!("{name} {last:.4} vs {}", d.n_rho.to_u64().unwrap_or(0)));
    }
    Ok(parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("parity-walk oracle equivalence", criterion_1),
        ("decomposition identity", criterion_2),
        ("matching polynomial as signed mean", criterion_3),
        ("BEST theorem vs backtracking", criterion_4),
        ("spanning-tree reduction", criterion_5),
        ("trace-formula closure", criterion_6),
        ("factored characteristic polynomial", criterion_7),
        ("spectral-radius multiplicity", criterion_8),
        ("β identities", criterion_9),
        ("AM-GM", criterion_10),
        ("convergence diagnostic", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail} [{t:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {detail} [{t:.1?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
