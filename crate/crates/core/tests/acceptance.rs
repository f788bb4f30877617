use std::process::ExitCode;
use std::time::{Duration, Instant};

use geninv::decompose::{
    core_ep_decompose, full_rank_chain, full_rank_decompose, index, FullRankChain,
};
use geninv::fixtures::{self, random_index_one, random_limit_pair, random_with_index, rng};
use geninv::inverses::{
    core, core_ep, core_ep_from_chain, core_ep_projector, drazin, dual_core, dual_core_ep,
    dual_core_ep_projector, group, moore_penrose, squared_mp_identity_holds, InverseKind,
    MethodKind,
};
use geninv::limits::{
    convergence_slope, limit_exact, pair_identity_holds, sweep, LambdaSchedule, LimitFormula,
    Operand, Side, Target, Theorem,
};
use geninv::matcore::rank;
use geninv::verify::Verifier;
use geninv::{Gaussian, Matrix};

type M = Matrix<Gaussian>;
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const CLOSED: [MethodKind; 3] = [
    MethodKind::ChainClosedForm,
    MethodKind::PowerFormula,
    MethodKind::DrazinProjector,
];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < budget, || {
        format!("took {spent:?}, budget {budget:?}")
    })
}

fn exact_limit(theorem: Theorem, side: Side, target: Target, a: &M) -> Result<M, String> {
    let f = LimitFormula::new(theorem, side, target).map_err(|e| e.to_string())?;
    limit_exact(&f, Operand::Single(a)).map_err(|e| format!("{f}: {e}"))
}

fn core_ep_reproduction() -> Outcome {
    let start = Instant::now();
    let a = fixtures::core_ep_sample();
    let expected = fixtures::core_ep_sample_inverse();
    let mut routes = 0;
    for m in CLOSED {
        let x = core_ep(&a, m).map_err(|e| e.to_string())?;
        ensure(x == expected, || format!("{m} differs"))?;
        routes += 1;
    }
    for theorem in [Theorem::Chain, Theorem::PowerMixed, Theorem::PowerGram] {
        for side in [Side::LeftShift, Side::RightShift] {
            if LimitFormula::new(theorem, side, Target::CoreEP).is_err() {
                continue;
            }
            let x = exact_limit(theorem, side, Target::CoreEP, &a)?;
            ensure(x == expected, || format!("{theorem}/{side} limit differs"))?;
            routes += 1;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("{routes} routes agree in {:?}", start.elapsed()))
}

fn core_reproduction() -> Outcome {
    let start = Instant::now();
    let a = fixtures::core_sample();
    let expected = fixtures::core_sample_inverse();
    ensure(core(&a).map_err(|e| e.to_string())? == expected, || {
        "closed form differs".into()
    })?;
    let mut routes = 1;
    for theorem in [Theorem::Chain, Theorem::PowerMixed, Theorem::PowerGram] {
        for side in [Side::LeftShift, Side::RightShift] {
            if LimitFormula::new(theorem, side, Target::Core).is_err() {
                continue;
            }
            let x = exact_limit(theorem, side, Target::Core, &a)?;
            ensure(x == expected, || format!("{theorem}/{side} limit differs"))?;
            routes += 1;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("{routes} routes agree in {:?}", start.elapsed()))
}

fn fixture_metadata() -> Outcome {
    let a = fixtures::core_ep_sample();
    let b = fixtures::core_sample();
    let meta = |m: &M| index(m).map(|k| (k, rank(m))).map_err(|e| e.to_string());
    ensure(meta(&a)? == (2, 3), || format!("index/rank {:?}", meta(&a)))?;
    ensure(meta(&b)? == (1, 2), || format!("index/rank {:?}", meta(&b)))?;
    ensure(
        full_rank_decompose(&a) == fixtures::core_ep_sample_pair(),
        || "canonical pair differs".into(),
    )?;
    Ok("(2, 3), (1, 2), canonical pair matches".into())
}

fn squared_mp_identity() -> Outcome {
    let check = |a: &M| squared_mp_identity_holds(a).map_err(|e| e.to_string());
    ensure(check(&fixtures::core_sample())?, || {
        "fails on the index-one sample".into()
    })?;
    let mut g = rng(45);
    for i in 0..100 {
        let n = 2 + i % 5;
        let a = random_index_one(&mut g, n);
        ensure(check(&a)?, || format!("fails on random case {i}: {a:?}"))?;
    }
    Ok("sample and 100 random index-one matrices".into())
}

fn property_case(a: &M, k: usize, verifier: &Verifier) -> Result<(), String> {
    let err = |e: geninv::Error| e.to_string();
    let ind = index(a).map_err(err)?;
    ensure(ind == k, || {
        format!("constructed index {k}, measured {ind}")
    })?;

    let mut candidates = vec![
        (InverseKind::MoorePenrose, moore_penrose(a).map_err(err)?),
        (InverseKind::Drazin, drazin(a).map_err(err)?),
        (
            InverseKind::CoreEP,
            core_ep(a, MethodKind::PowerFormula).map_err(err)?,
        ),
        (
            InverseKind::DualCoreEP,
            dual_core_ep(a, MethodKind::PowerFormula).map_err(err)?,
        ),
    ];
    if ind <= 1 {
        candidates.push((InverseKind::Group, group(a).map_err(err)?));
        candidates.push((InverseKind::Core, core(a).map_err(err)?));
        candidates.push((InverseKind::DualCore, dual_core(a).map_err(err)?));
    }
    for (kind, x) in &candidates {
        let report = verifier.check(*kind, a, x).map_err(err)?;
        ensure(report.passed, || {
            format!("{kind} fails {:?}", report.failures())
        })?;
    }

    let reference = &candidates[2].1;
    let dual_reference = &candidates[3].1;
    for m in CLOSED {
        ensure(&core_ep(a, m).map_err(err)? == reference, || {
            format!("core-EP via {m} differs")
        })?;
        ensure(&dual_core_ep(a, m).map_err(err)? == dual_reference, || {
            format!("dual core-EP via {m} differs")
        })?;
    }

    let d = core_ep_decompose(a).map_err(err)?;
    ensure(&d.a1 + &d.a2 == *a, || "A1 + A2 != A".into())?;
    ensure(index(&d.a1).map_err(err)? <= 1, || "ind(A1) > 1".into())?;
    ensure(d.a2.power(k).map_err(err)?.is_zero(), || {
        "A2 not nilpotent of order k".into()
    })?;
    ensure((&d.a1.conj_transpose() * &d.a2).is_zero(), || {
        "A1*A2 != 0".into()
    })?;
    ensure((&d.a2 * &d.a1).is_zero(), || "A2A1 != 0".into())?;

    for m in k..=k + 2 {
        ensure(&core_ep_projector(a, m).map_err(err)? == reference, || {
            format!("core-EP unstable at m={m}")
        })?;
        ensure(
            &dual_core_ep_projector(a, m).map_err(err)? == dual_reference,
            || format!("dual core-EP unstable at m={m}"),
        )?;
    }

    let mirrored = core_ep(&a.conj_transpose(), MethodKind::PowerFormula)
        .map_err(err)?
        .conj_transpose();
    ensure(&mirrored == dual_reference, || "duality fails".into())?;
    Ok(())
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let verifier = Verifier::default();
    let mut g = rng(2024);
    for i in 0..200usize {
        let k = 1 + i % 3;
        let n = k + 1 + i % 4;
        let complex = i % 2 == 1;
        let a = random_with_index(&mut g, n, k, complex);
        property_case(&a, k, &verifier).map_err(|e| format!("case {i} (n={n}, k={k}): {e}"))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("200 matrices in {:?}", start.elapsed()))
}

fn pair_identity() -> Outcome {
    let mut g = rng(11);
    for i in 0..50 {
        let (m, n) = random_limit_pair(&mut g, 5);
        let holds = pair_identity_holds(&m, &n).map_err(|e| format!("pair {i}: {e}"))?;
        ensure(holds, || format!("orderings differ on pair {i}"))?;
    }
    Ok("50 pairs of 5x5 matrices".into())
}

fn numeric_convergence() -> Outcome {
    let index_two = fixtures::core_ep_sample();
    let index_one = fixtures::core_sample();
    let cases = [
        (
            &index_two,
            Target::CoreEP,
            core_ep(&index_two, MethodKind::PowerFormula),
        ),
        (
            &index_two,
            Target::DualCoreEP,
            dual_core_ep(&index_two, MethodKind::PowerFormula),
        ),
        (&index_two, Target::MoorePenrose, moore_penrose(&index_two)),
        (
            &index_one,
            Target::CoreEP,
            core_ep(&index_one, MethodKind::PowerFormula),
        ),
        (
            &index_one,
            Target::DualCoreEP,
            dual_core_ep(&index_one, MethodKind::PowerFormula),
        ),
        (&index_one, Target::Core, core(&index_one)),
        (&index_one, Target::DualCore, dual_core(&index_one)),
        (&index_one, Target::MoorePenrose, moore_penrose(&index_one)),
    ];
    let schedule = LambdaSchedule::default();
    let mut formulas = 0;
    let mut worst_err: f64 = 0.0;
    let mut slopes = (f64::INFINITY, f64::NEG_INFINITY);
    for (a, target, expected) in cases {
        let reference = expected.map_err(|e| e.to_string())?.to_float();
        let af = a.to_float();
        for f in LimitFormula::all()
            .into_iter()
            .filter(|f| f.target == target)
        {
            let s = sweep(&f, Operand::Single(&af), &schedule).map_err(|e| format!("{f}: {e}"))?;
            ensure(s.converged, || format!("{f}: no convergence"))?;
            let slope = convergence_slope(&s, &reference)
                .ok_or_else(|| format!("{f}: too few points for a slope"))?;
            ensure((0.8..=1.2).contains(&slope), || {
                format!("{f}: slope {slope:.3}")
            })?;
            let value = s
                .extrapolated
                .as_ref()
                .ok_or_else(|| format!("{f}: no extrapolated value"))?;
            let err = value.max_diff(&reference).map_err(|e| e.to_string())?;
            ensure(err <= 1e-6, || format!("{f}: error {err:.3e}"))?;
            worst_err = worst_err.max(err);
            slopes = (slopes.0.min(slope), slopes.1.max(slope));
            formulas += 1;
        }
    }
    Ok(format!(
        "{formulas} formulas, slopes in [{:.3}, {:.3}], max error {worst_err:.1e}",
        slopes.0, slopes.1
    ))
}

fn factorization_invariance() -> Outcome {
    let a = fixtures::core_ep_sample();
    let pairs = vec![
        fixtures::core_ep_sample_pair(),
        fixtures::core_ep_sample_alt_link(),
    ];
    let canonical = full_rank_chain(&a).map_err(|e| e.to_string())?;
    ensure(canonical.pairs()[1] != pairs[1], || {
        "alternative link equals the canonical one".into()
    })?;
    let chain = FullRankChain::from_pairs(&a, pairs).map_err(|e| e.to_string())?;
    let x = core_ep_from_chain(&chain).map_err(|e| e.to_string())?;
    ensure(x == fixtures::core_ep_sample_inverse(), || {
        "chain closed form differs".into()
    })?;
    Ok("alternative factors give the same core-EP inverse".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("core-EP sample reproduction", core_ep_reproduction),
        ("core sample reproduction", core_reproduction),
        ("sample index, rank and factors", fixture_metadata),
        ("squared Moore-Penrose identity", squared_mp_identity),
        ("random property suite", property_suite),
        ("pair limit identity", pair_identity),
        ("numeric limit convergence", numeric_convergence),
        ("factorization invariance", factorization_invariance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}: {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {name} ({detail})", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
