//! One PASS/FAIL line per acceptance criterion. All comparisons are exact
//! except the corpus wall-clock bound.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{corpus, q, qs, random_domain_points, random_onto_spec, random_quad, random_spec};
use kkmfix::conditions::{
    check_b3_strong, check_b_subset, check_c1, check_c3, criterion, falsify_b, sublevel, BKind, SearchStrategy,
    Status, Witness,
};
use kkmfix::exactnum::{dist, rat, QuadExt, Rational};
use kkmfix::kkm::{em_chain, intersection_witness, verify_kkm, GKind};
use kkmfix::mapdef::{parse, serialize};
use kkmfix::mapping::{ClassSet, Interval};
use kkmfix::verdict::{run_corpus, run_theorem, TheoremId, TheoremOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const CORPUS_TIME_LIMIT: Duration = Duration::from_secs(10);
const RANDOM_MAPS: usize = 1000;
const KKM_SUBSETS: usize = 500;
const STRONG_B3_DRAWS: usize = 500;
const AXIOM_DRAWS: usize = 10_000;
const GRID_POINTS: i64 = 10_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus_fidelity() -> Outcome {
    let start = Instant::now();
    let results = run_corpus(&TheoremOptions::default(), None).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mismatched: Vec<usize> = results.iter().filter(|r| !r.matches).map(|r| r.entry.index).collect();
    ensure(results.len() == 14 && mismatched.is_empty(), || format!("mismatched entries {mismatched:?}"))?;
    let expected: [(usize, &[&str]); 11] = [
        (2, &["0", "5"]),
        (8, &["0", "10"]),
        (9, &["5"]),
        (10, &["5"]),
        (11, &["5"]),
        (3, &[]),
        (4, &[]),
        (5, &[]),
        (12, &[]),
        (13, &[]),
        (14, &[]),
    ];
    for (n, pts) in expected {
        let got = &results[n - 1].verdict.fixed_points;
        let want = ClassSet::points(qs(pts));
        ensure(*got == want, || format!("entry {n}: fixed points {got}, expected {want}"))?;
    }
    ensure(elapsed < CORPUS_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("14/14 MATCH in {:.2}s (limit {}s)", elapsed.as_secs_f64(), CORPUS_TIME_LIMIT.as_secs()))
}

fn c1_formulas() -> Outcome {
    let got = check_c1(&corpus(2), &q("6")).map_err(|e| e.to_string())?;
    ensure(got.set == ClassSet::interval(Interval::closed(q("0"), q("7"))), || format!("ex2 at 6: {}", got.set))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xc1);
    let ex5 = corpus(5);
    for _ in 0..20 {
        let x = random_quad(&mut rng);
        let got = check_c1(&ex5, &x).map_err(|e| e.to_string())?;
        let want = ClassSet::interval(Interval::at_least(&x - &q("1/2")));
        ensure(got.set == want && !got.compact, || format!("ex5 at {x}: {}", got.set))?;
    }
    let ex1 = corpus(1);
    for _ in 0..10 {
        let x = QuadExt::from(rat(rng.gen_range(6001..=40000), 1000));
        let fx = &(&x + &x) - &QuadExt::from_int(6);
        let want = ClassSet::interval(Interval::closed(QuadExt::zero(), (&x + &fx).half()));
        let got = check_c1(&ex1, &x).map_err(|e| e.to_string())?;
        ensure(got.set == want, || format!("ex1 at {x}: {}", got.set))?;
    }
    Ok("ex2 at 6 = [0, 7]; ex5 20/20; ex1 10/10; exact".into())
}

fn witness_reproduction() -> Outcome {
    let v = falsify_b(BKind::B1, &corpus(4), &SearchStrategy::default()).map_err(|e| e.to_string())?;
    let searched = v.stats.subsets_checked;
    let w = v.subset_witness().ok_or("b1 on ex4 not falsified")?;
    let (x1, x2) = match w.points.as_slice() {
        [a, b] => (a.clone(), b.clone()),
        other => return Err(format!("witness size {}", other.len())),
    };
    ensure(x1.is_zero() && x2 > q("5") && x2 < q("10"), || format!("witness {{{x1}, {x2}}}"))?;
    let v = check_b_subset(BKind::B3, &corpus(14), &qs(&["3", "7"])).map_err(|e| e.to_string())?;
    ensure(v.status == Status::Falsified, || format!("b3 on ex14 {{3, 7}}: {:?}", v.status))?;
    let u = v.subset_witness().map(|w| w.u.clone());
    ensure(u == Some(q("5")) && v.violation == Some(q("2")), || {
        format!("u = {u:?}, margin = {:?}", v.violation)
    })?;
    Ok(format!("ex4 b1 witness {{0, {x2}}} after {searched} subsets; ex14 b3 u = 5, margin 2"))
}

fn ex13_oracle(x: &Rational) -> Rational {
    let zero = rat(0, 1);
    let ten = rat(10, 1);
    if *x == zero {
        ten
    } else if *x == ten {
        zero
    } else if *x < rat(5, 1) {
        x * rat(4, 5)
    } else {
        x * rat(6, 5) - rat(2, 1)
    }
}

fn lsc_analysis() -> Outcome {
    let ex13 = corpus(13);
    let v = check_c3(&ex13).map_err(|e| e.to_string())?;
    ensure(v.status == Status::Falsified, || format!("c3: {:?}", v.status))?;
    let at = match &v.witness {
        Some(Witness::Point(p)) => p.clone(),
        Some(Witness::Points(ps)) if !ps.is_empty() => ps[0].clone(),
        other => return Err(format!("witness {other:?}")),
    };
    ensure(at.is_zero(), || format!("failure point {at}"))?;
    ensure(ex13.residual(&at).ok() == Some(q("10")), || "residual at 0 is not 10".into())?;

    let beta = rat(1, 2);
    let s = sublevel(&ex13, &QuadExt::from(beta.clone())).map_err(|e| e.to_string())?;
    let want = ClassSet::intervals([
        Interval::open_closed(q("0"), q("5/2")),
        Interval::closed_open(q("15/2"), q("10")),
    ]);
    ensure(s.set == want && !s.closed, || format!("sublevel {}", s.set))?;
    let mut members = 0;
    for k in 0..=GRID_POINTS {
        let x = rat(k * 10, GRID_POINTS);
        let r = ex13_oracle(&x) - &x;
        let inside = r.clone().max(-r) <= beta;
        ensure(inside == s.set.contains(&QuadExt::from(x.clone())), || format!("grid point {x}"))?;
        members += inside as usize;
    }
    let near_zero = QuadExt::from(rat(10, GRID_POINTS));
    ensure(s.set.contains(&near_zero) && !s.set.contains(&QuadExt::zero()), || "closure check".into())?;
    Ok(format!("fails at 0 with residual 10; sublevel {} not closed; {} grid points agree ({members} inside)", s.set, GRID_POINTS + 1))
}

fn kkm_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4b4b);
    for n in [1, 2, 5, 6, 7] {
        let spec = corpus(n);
        for _ in 0..KKM_SUBSETS {
            let size = rng.gen_range(1..=5);
            let pts = random_domain_points(&mut rng, &spec, size);
            let k = verify_kkm(&GKind::G1, &spec, &pts).map_err(|e| e.to_string())?;
            ensure(k.holds, || format!("ex{n}: {pts:?} uncovered at {:?}", k.uncovered))?;
        }
    }
    let k = verify_kkm(&GKind::G3(q("2")), &corpus(14), &qs(&["3", "7"])).map_err(|e| e.to_string())?;
    let u = k.uncovered.clone().unwrap_or_else(QuadExt::zero);
    ensure(!k.holds && u > q("4") && u < q("6"), || format!("g3 result {k:?}"))?;
    Ok(format!("G1 covered on 5 x {KKM_SUBSETS} subsets; G3(2) on ex14 uncovered at {u}"))
}

fn theorem_consistency() -> Outcome {
    let opts = TheoremOptions {
        strategy: SearchStrategy {
            budget: 40,
            random_points: 20,
            ..SearchStrategy::default()
        },
        exact_b: true,
        grid: None,
    };
    let mut runs = 0;
    for n in 1..=14 {
        for t in TheoremId::ALL {
            let v = run_theorem(&corpus(n), t, &opts).map_err(|e| e.to_string())?;
            ensure(v.consistent, || format!("ex{n} under {t}"))?;
            runs += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ee0);
    let specs: Vec<_> = (0..RANDOM_MAPS)
        .map(|k| if k % 2 == 0 { random_spec(&mut rng) } else { random_onto_spec(&mut rng) })
        .collect();
    let counts = specs
        .par_iter()
        .map(|spec| {
            let mut favorable = 0;
            for t in TheoremId::ALL {
                let v = run_theorem(spec, t, &opts).map_err(|e| e.to_string())?;
                ensure(v.consistent, || format!("{t} inconsistent on\n{}", serialize(spec)))?;
                favorable += v.all_favorable() as usize;
            }
            Ok(favorable)
        })
        .collect::<Result<Vec<usize>, String>>()?;
    runs += specs.len() * TheoremId::ALL.len();
    let favorable: usize = counts.iter().sum();
    Ok(format!("{runs} runs, none inconsistent ({favorable} random runs with all hypotheses favorable)"))
}

fn proof_artifacts() -> Outcome {
    for n in [9, 10, 11] {
        let r = em_chain(&corpus(n), 100).map_err(|e| e.to_string())?;
        ensure(r.nested && r.tail_intersection == ClassSet::point(q("5")) && r.tail_is_fixed_set, || {
            format!("ex{n}: nested {}, tail {}", r.nested, r.tail_intersection)
        })?;
    }
    let ex2 = corpus(2);
    let mut rng = ChaCha8Rng::seed_from_u64(0xe2);
    let mut sample = random_domain_points(&mut rng, &ex2, 2);
    let mut prev = intersection_witness(&GKind::G1, &ex2, &sample).map_err(|e| e.to_string())?;
    for _ in 0..10 {
        sample.extend(random_domain_points(&mut rng, &ex2, 2));
        let next = intersection_witness(&GKind::G1, &ex2, &sample).map_err(|e| e.to_string())?;
        ensure(next.is_subset(&prev) && next.contains(&q("5")), || format!("refinement gave {next}"))?;
        prev = next;
    }
    let ex9 = corpus(9);
    let mut strong = 0;
    for _ in 0..STRONG_B3_DRAWS {
        let size = rng.gen_range(1..=5);
        let mut pts = random_domain_points(&mut rng, &ex9, size);
        pts.sort();
        pts.dedup();
        let raw: Vec<i64> = pts.iter().map(|_| rng.gen_range(1..=20)).collect();
        let total: i64 = raw.iter().sum();
        let weights: Vec<QuadExt> = raw.iter().map(|&r| QuadExt::from(rat(r, total))).collect();
        let s = check_b3_strong(&ex9, &pts, &weights).map_err(|e| e.to_string())?;
        if s.holds {
            strong += 1;
            let c = criterion(BKind::B3, &ex9, &pts, &s.u).map_err(|e| e.to_string())?;
            ensure(!c.is_negative(), || format!("b3 fails at {pts:?} with u = {}", s.u))?;
        }
    }
    Ok(format!("chains nested with tail {{5}}; final G1 intersection {prev}; strong b3 held on {strong}/{STRONG_B3_DRAWS} draws, b3 on all of them"))
}

fn exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8888);
    let zero = QuadExt::zero();
    let one = QuadExt::one();
    for _ in 0..AXIOM_DRAWS {
        let (x, y, z) = (random_quad(&mut rng), random_quad(&mut rng), random_quad(&mut rng));
        let field = &(&x + &y) + &z == &x + &(&y + &z)
            && &x * &y == &y * &x
            && &(&x * &y) * &z == &x * &(&y * &z)
            && &x * &(&y + &z) == &(&x * &y) + &(&x * &z)
            && &x + &(-&x) == zero
            && (x.is_zero() || &x * &x.recip().unwrap() == one);
        ensure(field, || format!("field axioms at {x}, {y}, {z}"))?;
        let order = ((x < y) as u8 + (x == y) as u8 + (x > y) as u8 == 1)
            && (x > y) == (&x + &z > &y + &z)
            && (!(x.is_positive() && y.is_positive()) || (&x * &y).is_positive())
            && (!(x <= y && y <= z) || x <= z);
        let gap = x.to_f64() - y.to_f64();
        let float_sign = gap.abs() < 1e-9 || (x < y) == (gap < 0.0);
        let order = order && float_sign;
        ensure(order, || format!("order axioms at {x}, {y}, {z}"))?;
        let metric = dist(&x, &y) == dist(&y, &x)
            && !dist(&x, &y).is_negative()
            && (dist(&x, &y).is_zero() == (x == y))
            && dist(&x, &z) <= &dist(&x, &y) + &dist(&y, &z);
        ensure(metric, || format!("metric axioms at {x}, {y}, {z}"))?;
    }
    for n in 1..=14 {
        let spec = corpus(n);
        ensure(parse(&serialize(&spec)).ok() == Some(spec), || format!("ex{n} round trip"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x9999);
    for k in 0..100 {
        let spec = random_spec(&mut rng);
        ensure(parse(&serialize(&spec)).ok() == Some(spec), || format!("generated spec {k} round trip"))?;
    }
    Ok(format!("{AXIOM_DRAWS} axiom draws with zero tolerance; 14 corpus + 100 generated specs round-trip"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("corpus fidelity", corpus_fidelity),
        ("c1 set formulas", c1_formulas),
        ("witness reproduction", witness_reproduction),
        ("c3/lsc analysis", lsc_analysis),
        ("KKM property", kkm_property),
        ("theorem consistency", theorem_consistency),
        ("proof artifacts", proof_artifacts),
        ("exactness foundation", exactness),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.2}s]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} [{secs:.2}s]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
