//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsverify::analytic::formulas::{check_grid, evaluation_formulas, DEFAULT_PRECISION, DEFAULT_TOLERANCE, GRID};
use qsverify::analytic::hyp::hyp2f1_half_series;
use qsverify::analytic::{dy_dx_residual, hyp2f1_half, make_point, ode_residual};
use qsverify::arith::{convolution, sieve, ConvolutionShape, DivisorKind};
use qsverify::generators::{build, build_with, rep_series, BuildOptions, SeriesName};
use qsverify::identity::convolutions::{check_convolution, extraction_route, rhs_value, theorem};
use qsverify::identity::registry::lookup;
use qsverify::identity::{combination_expr, evaluate, express_in_basis, parse_expr, verify, Expected, IdentityRecord, Status};
use qsverify::partitions::{congruence_scan, p_r_series, parity_count_oracle, CongruenceClaim};
use qsverify::qseries::{lambert_expand, LambertFamily, LambertStride, LambertWeight, Parity, Series};
use qsverify::representations::{jacobi_r4, ono_delta8, rep_bruteforce, rep_formula, williams_r8, RepKind};

type Check = Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn verify_named(name: &str, order: usize) -> Check {
    let rec = lookup(name).ok_or_else(|| format!("{name} not registered"))?;
    let out = verify(&rec, order);
    ensure(out.passed(), || format!("{name} fails at order {order}: {:?}", out.first_failure))
}

fn within(elapsed: Duration, budget: Duration, what: &str) -> Check {
    ensure(elapsed <= budget, || format!("{what} took {elapsed:?}, budget {budget:?}"))
}

fn differential_equations() -> Check {
    let t = Instant::now();
    for name in ["dP", "dQ", "dR", "dmp", "dme", "dmq"] {
        verify_named(name, 500)?;
    }
    within(t.elapsed(), Duration::from_secs(30), "order-500 suite")
}

fn sigma_convolutions() -> Check {
    for name in ["sigma1", "sigma2"] {
        let th = theorem(name).ok_or("missing theorem")?;
        let e = check_convolution(&th, 2000).map_err(|e| e.to_string())?;
        ensure(e.status == Status::Pass, || format!("{name}: {:?}", e.first_failure))?;
    }
    // Direct sieved route on its own at a few indices.
    let s1 = sieve(DivisorKind::sigma(1), 2000).map_err(|e| e.to_string())?;
    let s3 = sieve(DivisorKind::sigma(3), 2000).map_err(|e| e.to_string())?;
    for n in [2usize, 17, 1000, 2000] {
        let lhs = convolution(s1.as_slice(), s1.as_slice(), ConvolutionShape::Plain, n).map_err(|e| e.to_string())? * int(12);
        let rhs = BigRational::from_integer(s3.at(n as i64) * 5 - s1.at(n as i64) * (6 * n as i64 - 1));
        ensure(lhs == rhs, || format!("sigma1 direct at n={n}"))?;
    }
    Ok(())
}

fn divisor_convolutions() -> Check {
    for name in ["t3", "ht", "whwh", "t5"] {
        let th = theorem(name).ok_or("missing theorem")?;
        let e = check_convolution(&th, 2000).map_err(|e| e.to_string())?;
        ensure(e.status == Status::Pass, || format!("{name}: {:?}", e.first_failure))?;
    }
    for (name, value) in [("t3", 4), ("t5", 16)] {
        let th = theorem(name).ok_or("missing theorem")?;
        ensure(extraction_route(&th, 2)[2] == int(value), || format!("{name} lhs at n=2"))?;
        ensure(rhs_value(&th, 2).map_err(|e| e.to_string())? == int(value), || format!("{name} rhs at n=2"))?;
    }
    // Hand values: w~_3(2) = 1 - 8 = -7, so 7 - 3 is 4*1 with w~(1)^2 = 1.
    let wt3 = sieve(DivisorKind::wt(3), 2).map_err(|e| e.to_string())?;
    ensure(wt3.at(2) == BigInt::from(-7), || "w~_3(2)".into())
}

fn theta_identities() -> Check {
    for name in ["mq-v", "2ee-3v", "vemq-2v", "ee-p", "mpmp-p", "emq-p"] {
        verify_named(name, 500)?;
    }
    let ge2 = evaluate(&parse_expr("GE^2").unwrap(), 2).coeff(2);
    let gq = evaluate(&parse_expr("GQ").unwrap(), 2).coeff(2);
    let delta8 = rep_formula(RepKind::Triangular, 8, 1).map_err(|e| e.to_string())?;
    ensure(ge2 == int(624) && gq == int(112), || format!("coefficients {ge2} and {gq}"))?;
    ensure(int(512) == BigRational::from_integer(delta8 * 64), || "64 delta_8(1)".into())
}

fn audit_report() -> Check {
    let failure = |name: &str| {
        let rec = lookup(name).expect("registered");
        ensure(rec.expected == Expected::Audit, || format!("{name} should be audit"))?;
        verify(&rec, 500).first_failure.ok_or_else(|| format!("{name} unexpectedly passes"))
    };
    let f = failure("pv-e")?;
    ensure((f.n, f.lhs.to_string(), f.rhs.to_string()) == (0, "17".into(), "1".into()), || format!("pv-e {f:?}"))?;
    let f = failure("sq0")?;
    ensure(f.n == 0, || format!("sq0 {f:?}"))?;
    let f = failure("mqmq-p")?;
    ensure((f.n, f.lhs.to_string(), f.rhs.to_string()) == (0, "2".into(), "0".into()), || format!("mqmq-p {f:?}"))?;
    let f = failure("tt3-ht3")?;
    ensure(f.n == 2, || format!("tt3-ht3 {f:?}"))?;

    let tt2 = theorem("tt2").ok_or("missing tt2")?;
    let first = check_convolution(&tt2, 500).map_err(|e| e.to_string())?.first_failure.map(|f| f.n);
    ensure(first == Some(2), || format!("tt2 first failure {first:?}"))?;
    let lhs4 = extraction_route(&tt2, 4)[4].clone();
    let rhs4 = rhs_value(&tt2, 4).map_err(|e| e.to_string())?;
    ensure(lhs4 == int(-8) && rhs4 == int(-15), || format!("tt2 at n=4: {lhs4} vs {rhs4}"))?;

    for name in ["pv-e-corrected", "tt3-ht3-corrected", "tt2-corrected"] {
        verify_named(name, 500)?;
    }
    for name in ["tt3-ht3-corrected", "tt2-corrected"] {
        let th = theorem(name).ok_or("missing theorem")?;
        let e = check_convolution(&th, 500).map_err(|e| e.to_string())?;
        ensure(e.status == Status::Pass, || format!("{name}: {:?}", e.first_failure))?;
    }

    let mut sink = Vec::new();
    let audit = qsverify_cli::run(["qsverify", "audit", "--order", "200"], &mut sink, &mut Vec::new());
    let verify = qsverify_cli::run(["qsverify", "verify", "--order", "200"], &mut sink, &mut Vec::new());
    ensure((audit, verify) == (0, 0), || format!("exit codes audit={audit} verify={verify}"))
}

fn basis_recovery() -> Check {
    let exprs = |v: &[&str]| v.iter().map(|s| parse_expr(s).unwrap()).collect::<Vec<_>>();
    let cases = [
        ("GP*dilate(GP, 2)", exprs(&["dilate(GQ, 2)", "D(GP)", "D(dilate(GP, 2))"]), [1, 1, 2], 100),
        ("GE^2", exprs(&["GQ", "dilate(GQ, 2)", "GQ12"]), [5, -4, 128], 100),
    ];
    for (target, basis, expected, order) in cases {
        let t = parse_expr(target).unwrap();
        let c = express_in_basis(&t, &basis, order).map_err(|e| e.to_string())?.ok_or("no combination")?;
        ensure(c == expected.map(int), || format!("{target}: {c:?}"))?;
        let rec = IdentityRecord::new("recovered", t, combination_expr(&basis, &c), Expected::Pass);
        ensure(verify(&rec, 2 * order).passed(), || format!("{target} at order {}", 2 * order))?;
    }
    Ok(())
}

fn representations() -> Check {
    const N: usize = 500;
    for kind in [RepKind::Squares, RepKind::Triangular] {
        for s in [4u32, 8] {
            let dp = rep_bruteforce(kind, s, N).map_err(|e| e.to_string())?;
            let series = rep_series(kind, s, N).map_err(|e| e.to_string())?;
            let start = if kind == RepKind::Squares { 1 } else { 0 };
            for n in start..=N {
                let f = rep_formula(kind, s, n as i64).map_err(|e| e.to_string())?;
                ensure(f == dp.counts[n] && f == series.coeff(n), || format!("{kind:?} s={s} n={n}"))?;
            }
        }
    }
    for n in 1..=N as i64 {
        let r4 = rep_formula(RepKind::Squares, 4, n).unwrap();
        let r8 = rep_formula(RepKind::Squares, 8, n).unwrap();
        ensure(jacobi_r4(n).map_err(|e| e.to_string())? == r4, || format!("jacobi n={n}"))?;
        ensure(williams_r8(n) == r8, || format!("williams n={n}"))?;
        ensure(ono_delta8(n) == rep_formula(RepKind::Triangular, 8, n).unwrap(), || format!("ono n={n}"))?;
    }
    let spot = [
        (rep_formula(RepKind::Squares, 4, 2).unwrap(), 24),
        (rep_formula(RepKind::Squares, 8, 2).unwrap(), 112),
        (rep_bruteforce(RepKind::Triangular, 8, 2).unwrap().counts[2].clone(), 28),
    ];
    ensure(spot.iter().all(|(v, e)| *v == BigInt::from(*e)), || format!("spot values {spot:?}"))
}

fn congruences() -> Check {
    let mu = congruence_scan(&CongruenceClaim::mu_mod3(2000)).map_err(|e| e.to_string())?;
    let nu = congruence_scan(&CongruenceClaim::nu_mod3(2000)).map_err(|e| e.to_string())?;
    ensure(mu.is_empty() && nu.is_empty(), || format!("violations mu={} nu={}", mu.len(), nu.len()))?;
    let th = theorem("nu-wh").ok_or("missing nu-wh")?;
    let e = check_convolution(&th, 2000).map_err(|e| e.to_string())?;
    ensure(e.status == Status::Pass, || format!("nu-wh: {:?}", e.first_failure))?;
    for r in 1..=3 {
        let p = p_r_series(r as i32, 20).map_err(|e| e.to_string())?;
        for n in 0..=20 {
            let (even, odd) = parity_count_oracle(r, n).map_err(|e| e.to_string())?;
            ensure(p.coeff(n) == BigInt::from(even) - BigInt::from(odd), || format!("p_{r}({n})"))?;
        }
    }
    Ok(())
}

fn numeric_grid() -> Check {
    let t = Instant::now();
    let reports = check_grid(&evaluation_formulas(), &GRID, DEFAULT_PRECISION, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
    let bad: Vec<_> = reports.iter().filter(|r| r.is_regression()).map(|r| format!("{}@{}", r.id, r.x)).collect();
    ensure(bad.is_empty(), || format!("residual breaches {bad:?}"))?;
    for x in GRID {
        let ode = ode_residual(x, DEFAULT_PRECISION).map_err(|e| e.to_string())?;
        ensure(ode <= 1e-7, || format!("ode at {x}: {ode}"))?;
        let dy = dy_dx_residual(x, DEFAULT_PRECISION, 1e-5).map_err(|e| e.to_string())?;
        ensure(dy <= 1e-6, || format!("dy/dx at {x}: {dy}"))?;
    }
    let p = make_point(0.5, DEFAULT_PRECISION).map_err(|e| e.to_string())?;
    ensure((p.y - PI).abs() <= 1e-12, || format!("y(0.5) = {}", p.y))?;
    let z = hyp2f1_half(0.5, DEFAULT_PRECISION).map_err(|e| e.to_string())?;
    let oracle = hyp2f1_half_series(0.5, 1e-18, 0).map_err(|e| e.to_string())?;
    ensure((z - oracle).abs() <= 1e-9 && (z - 1.18034059901).abs() <= 1e-9, || format!("z(0.5) = {z}"))?;
    within(t.elapsed(), Duration::from_secs(10), "numeric grid")
}

fn random_series(rng: &mut ChaCha8Rng, order: usize) -> Series {
    Series::from_fn(order, |_| BigInt::from(rng.gen_range(-50i64..=50)))
}

fn property_suites() -> Check {
    const ORDER: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    for round in 0..8 {
        let (a, b, c) = (random_series(&mut rng, ORDER), random_series(&mut rng, ORDER), random_series(&mut rng, ORDER));
        let fail = |law: &str| format!("{law} (round {round})");
        ensure(&(&a + &b) + &c == &a + &(&b + &c), || fail("additive associativity"))?;
        ensure(&a + &b == &b + &a, || fail("additive commutativity"))?;
        ensure(&(&a * &b) * &c == &a * &(&b * &c), || fail("multiplicative associativity"))?;
        ensure(&a * &b == &b * &a, || fail("multiplicative commutativity"))?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || fail("distributivity"))?;
        ensure(&a * &Series::one(ORDER) == a && (&a - &a).is_zero(), || fail("identities"))?;
        let leibniz = &(&a.theta_derivative() * &b) + &(&a * &b.theta_derivative());
        ensure((&a * &b).theta_derivative() == leibniz, || fail("Leibniz rule"))?;
        ensure(a.alternate().alternate() == a, || fail("alternation involution"))?;
        ensure(&a.parity_part(Parity::Even) + &a.parity_part(Parity::Odd) == a, || fail("parity split"))?;
        ensure(&a.parity_part(Parity::Even) - &a.parity_part(Parity::Odd) == a.alternate(), || fail("parity vs alternation"))?;
        let k = rng.gen_range(2..=5);
        let expected = if k % 2 == 0 { a.dilate(k).unwrap() } else { a.alternate().dilate(k).unwrap() };
        ensure(a.dilate(k).unwrap().alternate() == expected, || fail("dilation vs alternation"))?;
        let mut unit = random_series(&mut rng, ORDER).into_coeffs();
        unit[0] = if rng.gen_bool(0.5) { BigInt::one() } else { -BigInt::one() };
        let unit = Series::from_coeffs(unit);
        let inv = unit.reciprocal().map_err(|e| e.to_string())?;
        ensure(&unit * &inv == Series::one(ORDER), || fail("reciprocal inverse"))?;
    }
    for name in [SeriesName::Phi, SeriesName::Psi, SeriesName::FNeg] {
        build_with(name, ORDER, BuildOptions::PARANOID).map_err(|e| format!("sum vs product for {name}: {e}"))?;
    }
    for name in [SeriesName::P, SeriesName::Q, SeriesName::R, SeriesName::GP, SeriesName::GE, SeriesName::GQ, SeriesName::Wt5Series] {
        build_with(name, ORDER, BuildOptions::PARANOID).map_err(|e| format!("lambert vs sieve for {name}: {e}"))?;
    }
    for s in 0..=7u32 {
        let lam = lambert_expand(LambertWeight::new(LambertFamily::DPower, s, LambertStride::Single), ORDER);
        if s >= 1 {
            let sig = sieve(DivisorKind::sigma(s), ORDER).map_err(|e| e.to_string())?;
            ensure((1..=ORDER).all(|n| lam.coeff(n) == sig.at(n as i64)), || format!("sigma_{s} lambert vs sieve"))?;
            let alt = lambert_expand(LambertWeight::new(LambertFamily::AltDPower, s, LambertStride::Single), ORDER);
            let wt = sieve(DivisorKind::wt(s), ORDER).map_err(|e| e.to_string())?;
            ensure((1..=ORDER).all(|n| alt.coeff(n) == wt.at(n as i64)), || format!("w~_{s} lambert vs sieve"))?;
        }
    }
    ensure(build(SeriesName::Nome, 3) == Series::monomial(1, 1, 3), || "nome".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("differential equations verify to order 500", differential_equations),
        ("sigma convolutions hold for n <= 2000", sigma_convolutions),
        ("t3, ht, whwh, t5 hold for n <= 2000 by both routes", divisor_convolutions),
        ("theta identities verify to order 500", theta_identities),
        ("audit report and corrected variants", audit_report),
        ("basis recovery with re-verification at 2N", basis_recovery),
        ("representation formulas for n <= 500", representations),
        ("congruences, nu identity and parity oracle", congruences),
        ("numeric grid, ODE, nome derivative, spot values", numeric_grid),
        ("seeded property suites at order 200", property_suites),
    ];
    let mut failed = 0;
    for (i, (label, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match check() {
            Ok(()) => println!("PASS  criterion {:>2}: {label} ({:.2?})", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {:>2}: {label}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
