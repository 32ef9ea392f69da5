//! Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Numeric expectations come from oracles written here, independent
//! of the library code under test.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use orbicalc_core::mordell::{self, Sign};
use orbicalc_core::poly::{BinaryForm, Form};
use orbicalc_core::restrict::{self, PLANE_VARS};
use orbicalc_core::symdiff::{self, EnumerationLimits};
use orbicalc_core::{
    BaseMode, CurveOrbifold, FiberComponent, FibrationData, Kappa, LowerTerm, Multiplicity,
    OrbifoldP1Triple, ParamPlaneCurve, PlaneArrangementPair, PlaneDivisorComponent, TwoStageData,
    Variant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

/// Number, name, optional time budget and check.
type Criterion = (u32, &'static str, Option<Duration>, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn int(m: u64) -> Multiplicity {
    Multiplicity::integer(m).unwrap()
}

fn c1_trichotomy() -> Check {
    let mut count = 0;
    for p in 2..=30u64 {
        for q in p..=30 {
            for r in q..=30 {
                let curve = CurveOrbifold::rational_with([int(p), int(q), int(r)]);
                // 1/p + 1/q + 1/r < 1  <=>  qr + pr + pq < pqr
                let hyperbolic = q * r + p * r + p * q < p * q * r;
                ensure((curve.kappa() == Kappa::One) == hyperbolic, || {
                    format!("({p},{q},{r}) gave kappa {}", curve.kappa())
                })?;
                count += 1;
            }
        }
    }
    let deg = CurveOrbifold::rational_with([int(2), int(3), int(7)]).canonical_degree();
    ensure(deg == ratio(1, 42), || format!("(2,3,7) degree {deg}"))?;
    Ok(format!("{count} triples, deg(2,3,7)=1/42"))
}

fn c2_fano() -> Check {
    let cases: [(&[u64], BigRational, bool); 3] = [
        (&[3, 3, 5, 7], ratio(1, 105), true),
        (&[2, 3, 7, 41], ratio(1, 1722), true),
        (&[3, 3, 5, 8], ratio(-1, 120), false),
    ];
    for (ms, expected, fano) in cases {
        let pair = PlaneArrangementPair::lines(ms.iter().map(|&m| int(m)));
        let got = pair.anticanonical_degree();
        // 3 - sum (1 - 1/m) = sum 1/m - 1 for four lines
        let oracle = ms.iter().fold(-BigRational::one(), |acc, &m| acc + ratio(1, m as i64));
        ensure(got == expected && got == oracle && pair.is_fano() == fano, || {
            format!("{ms:?}: degree {got}, fano {}", pair.is_fano())
        })?;
    }
    Ok("1/105, 1/1722 Fano; (3,3,5,8) not".into())
}

fn c3_inf_gcd() -> Check {
    let comps = [(2, 1), (2, 1), (2, 1), (3, 1), (3, 1)]
        .iter()
        .map(|&(t, m)| FiberComponent::integral(t, m).unwrap())
        .collect();
    let data = FibrationData::new([("p", comps)]).map_err(|e| e.to_string())?;
    let inf = data.base_multiplicity("p", BaseMode::Inf).map_err(|e| e.to_string())?;
    let gcd = data.base_multiplicity("p", BaseMode::Gcd).map_err(|e| e.to_string())?;
    ensure(inf == int(2) && gcd == int(1), || format!("inf {inf}, gcd {gcd}"))?;
    Ok("inf=2 gcd=1".into())
}

/// `t·m` with `None` for infinity.
fn weight(t: u64, m: Option<u64>) -> Option<BigRational> {
    m.map(|m| BigRational::from_integer(BigInt::from(t * m)))
}

fn min_weight(ws: impl Iterator<Item = Option<BigRational>>) -> Option<BigRational> {
    ws.fold(None::<Option<BigRational>>, |acc, w| match (acc, w) {
        (None, w) => Some(w),
        (Some(None), w) => Some(w),
        (Some(Some(a)), None) => Some(Some(a)),
        (Some(Some(a)), Some(b)) => Some(Some(a.min(b))),
    })
    .flatten()
}

fn as_mult(w: Option<BigRational>) -> Multiplicity {
    w.map_or_else(Multiplicity::infinity, |v| Multiplicity::new(v).unwrap())
}

fn c4_composition() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c0ffee);
    let instances = 10_000;
    let mut with_inf = 0;
    for i in 0..instances {
        let n_y = rng.random_range(1..=4);
        let mut fibers = Vec::new();
        let mut raw: Vec<Vec<(u64, Option<u64>)>> = Vec::new();
        for y in 0..n_y {
            let parts: Vec<(u64, Option<u64>)> = (0..rng.random_range(1..=3))
                .map(|_| {
                    let m = if rng.random_ratio(1, 6) { None } else { Some(rng.random_range(1..=12)) };
                    (rng.random_range(1..=20), m)
                })
                .collect();
            let comps = parts
                .iter()
                .map(|&(t, m)| FiberComponent::new(t, m.map_or_else(Multiplicity::infinity, int)).unwrap())
                .collect();
            fibers.push((format!("y{y}"), comps));
            raw.push(parts);
        }
        if raw.iter().flatten().any(|(_, m)| m.is_none()) {
            with_inf += 1;
        }
        let mut lower = Vec::new();
        let mut raw_lower = Vec::new();
        for z in 0..rng.random_range(1..=3) {
            let mut ys: Vec<usize> = (0..n_y).collect();
            let keep = rng.random_range(1..=n_y);
            for k in 0..keep {
                let j = rng.random_range(k..n_y);
                ys.swap(k, j);
            }
            let terms: Vec<(u64, usize)> = ys[..keep].iter().map(|&y| (rng.random_range(1..=20), y)).collect();
            lower.push((
                format!("z{z}"),
                terms.iter().map(|&(s, y)| LowerTerm { s, y_label: format!("y{y}") }).collect(),
            ));
            raw_lower.push(terms);
        }
        let upper = FibrationData::new(fibers).map_err(|e| e.to_string())?;
        let tower = TwoStageData::new(upper, lower).map_err(|e| e.to_string())?;
        let composed = tower.compose_base().map_err(|e| e.to_string())?;
        for (z, terms) in raw_lower.iter().enumerate() {
            let label = format!("z{z}");
            let direct = min_weight(
                terms.iter().flat_map(|&(s, y)| raw[y].iter().map(move |&(t, m)| weight(s * t, m))),
            );
            let staged = min_weight(terms.iter().map(|&(s, y)| {
                min_weight(raw[y].iter().map(|&(t, m)| weight(t, m))).map(|w| w * BigInt::from(s))
            }));
            let expected = as_mult(direct.clone());
            ensure(direct == staged, || format!("instance {i}: oracle disagrees on {label}"))?;
            ensure(
                composed.direct.multiplicity(&label) == expected
                    && composed.staged.multiplicity(&label) == expected,
                || format!("instance {i} {label}: direct {}, staged {}, oracle {expected}", composed.direct, composed.staged),
            )?;
        }
    }
    Ok(format!("{instances} towers, {with_inf} with infinite components"))
}

fn x(i: usize) -> Form {
    Form::var(&PLANE_VARS, i)
}

fn component(label: &str, form: Form, m: Multiplicity) -> PlaneDivisorComponent {
    PlaneDivisorComponent::new(label, form, m).unwrap()
}

/// The line `s·p + u·q` through two points.
fn line_through(p: [i64; 3], q: [i64; 3]) -> ParamPlaneCurve {
    ParamPlaneCurve::new([0, 1, 2].map(|i| BinaryForm::from_i64s(&[q[i], p[i]]))).unwrap()
}

fn z_rational(curve: &ParamPlaneCurve, arrangement: &[PlaneDivisorComponent]) -> Result<(bool, usize), String> {
    let r = restrict::restriction(curve, arrangement, Variant::Z).map_err(|e| e.to_string())?;
    Ok((r.orbifold.is_rational(), r.points.len()))
}

fn c5_line_families() -> Check {
    let third = [1, 3, 7];
    let mut checked = 0;
    for a in 2..=12 {
        for b in 2..=12 {
            for c in 2..=12 {
                let arr = [
                    component("A", x(0), int(a)),
                    component("B", x(1), int(b)),
                    component("C", x(2), int(c)),
                ];
                for node in [[0, 0, 1], [0, 1, 0], [1, 0, 0]] {
                    let (rational, points) = z_rational(&line_through(node, third), &arr)?;
                    ensure(rational && points == 2, || format!("({a},{b},{c}) node {node:?}"))?;
                    checked += 1;
                }
            }
        }
    }
    let nodes: [([i64; 3], bool); 6] = [
        ([0, 0, 1], false),  // A n B
        ([0, 1, 0], false),  // A n C
        ([0, 1, -1], false), // A n E
        ([1, 0, 0], false),  // B n C
        ([1, 0, -1], false), // B n E
        ([1, -1, 0], true),  // C n E, the (a, b) node
    ];
    for a in 4..=12 {
        for b in a..=12 {
            let arr = [
                component("A", x(0), int(2)),
                component("B", x(1), int(2)),
                component("C", x(2), int(a)),
                component("E", x(0).add(&x(1)).add(&x(2)), int(b)),
            ];
            for (node, expected) in nodes {
                let (rational, points) = z_rational(&line_through(node, third), &arr)?;
                ensure(rational == expected && points == 3, || {
                    format!("(2,2,{a},{b}) node {node:?}: rational {rational}, {points} points")
                })?;
                checked += 1;
            }
        }
    }
    // conics against a line of infinite multiplicity: rational iff tangent
    let d = [component("D", x(2), Multiplicity::infinity())];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tangent, mut secant) = (0, 0);
    while tangent + secant < 200 {
        let mut rows = [[0i64; 3]; 3];
        for row in rows.iter_mut() {
            for v in row.iter_mut() {
                *v = rng.random_range(-5..=5);
            }
        }
        if rng.random_bool(0.5) {
            // make x2 a square (alpha s + beta u)^2
            let (al, be) = (rng.random_range(-3..=3), rng.random_range(-3..=3));
            rows[2] = [be * be, 2 * al * be, al * al];
        }
        if det3(&rows) == 0 {
            continue;
        }
        let curve = ParamPlaneCurve::new(rows.map(|r| BinaryForm::from_i64s(&r))).unwrap();
        let [c0, c1, c2] = rows[2];
        let is_tangent = c1 * c1 - 4 * c0 * c2 == 0;
        let (rational, _) = z_rational(&curve, &d)?;
        ensure(rational == is_tangent, || format!("conic {rows:?}: rational {rational}"))?;
        if is_tangent {
            tangent += 1;
        } else {
            secant += 1;
        }
    }
    Ok(format!("{checked} node lines, {tangent} tangent and {secant} secant conics"))
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn c6_floor_lemmas() -> Check {
    let positive = symdiff::sweep_positive_floor(4, &[2, 3, 4], 2, EnumerationLimits::default())
        .map_err(|e| e.to_string())?;
    ensure(positive.violations.is_empty(), || format!("positive floor: {:?}", positive.violations))?;
    let relative = symdiff::sweep_relative_bounds(20, 4, 6).map_err(|e| e.to_string())?;
    ensure(relative.violations.is_empty(), || format!("relative bounds: {:?}", relative.violations))?;
    Ok(format!(
        "{} floor configurations / {} multi-indices, {} relative cases",
        positive.configurations, positive.cases, relative.cases
    ))
}

fn naive_p_full(n: u64, p: u32) -> bool {
    let mut n = n;
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 && e < p {
            return false;
        }
        d += 1;
    }
    n == 1
}

fn c7_p_full() -> Check {
    let got = mordell::enumerate_p_full(100, 2).map_err(|e| e.to_string())?;
    let oracle: Vec<u64> = (1..=100).filter(|&n| naive_p_full(n, 2)).collect();
    ensure(got.len() == 14 && got == oracle, || format!("{got:?} vs {oracle:?}"))?;
    let mut slopes = Vec::new();
    for p in [2u32, 3] {
        let r = mordell::density_report(1_000_000, p).map_err(|e| e.to_string())?;
        let target = 1.0 / f64::from(p);
        ensure((r.slope - target).abs() <= 0.08, || format!("p={p} slope {:.4}", r.slope))?;
        slopes.push(format!("p={p} slope {:.4}", r.slope));
    }
    Ok(format!("14 squarefull <= 100, {}", slopes.join(", ")))
}

fn triple(p: u32, q: u32, r: u32) -> OrbifoldP1Triple {
    OrbifoldP1Triple::new(p, q, r).unwrap()
}

fn has_point(points: &[orbicalc_core::RationalPoint], a: u64, b: u64) -> bool {
    points.iter().any(|x| x.a() == &a.into() && x.b() == &b.into())
}

fn c8_mordell() -> Check {
    let e = |e: orbicalc_core::Error| e.to_string();
    let p273 = mordell::search_points(&triple(2, 7, 3), 100, 100, Sign::Minus).map_err(e)?;
    ensure(has_point(&p273, 9, 8), || format!("(2,7,3): {p273:?}"))?;
    let p237 = mordell::search_points(&triple(2, 3, 7), 100, 100, Sign::Minus).map_err(e)?;
    ensure(has_point(&p237, 9, 1), || format!("(2,3,7): {p237:?}"))?;
    let t323 = triple(3, 2, 3);
    let ws = mordell::search_classical(&t323, 10, 10).map_err(e)?;
    let one_two_three = ws
        .iter()
        .any(|w| w.alpha == 1.into() && w.beta == 2.into() && w.gamma == 3.into());
    ensure(one_two_three, || format!("(3,2,3) classical: {ws:?}"))?;
    ensure(BigInt::from(1).pow(3) + BigInt::from(2).pow(3) == BigInt::from(3).pow(2), || "1+8=9".into())?;
    let mut inclusions = 0;
    for t in [t323, triple(2, 2, 2), triple(2, 3, 2), triple(3, 3, 2), triple(2, 2, 3)] {
        let ws = mordell::search_classical(&t, 12, 12).map_err(e)?;
        let points: Vec<_> = ws.iter().filter_map(|w| w.point(&t)).collect();
        let max_a = points.iter().map(|x| u64::try_from(x.a()).unwrap()).max().unwrap_or(1);
        let max_b = points.iter().map(|x| u64::try_from(x.b()).unwrap()).max().unwrap_or(1);
        let found = mordell::search_points(&t, max_a, max_b, Sign::Plus).map_err(e)?;
        for x in &points {
            ensure(found.contains(x), || format!("{t}: classical point {x} missing"))?;
            inclusions += 1;
        }
    }
    let mut shard_runs = 0;
    for (t, sign) in [(triple(2, 2, 2), Sign::Minus), (triple(2, 3, 2), Sign::Plus), (triple(2, 7, 3), Sign::Minus)] {
        let whole = mordell::search_points(&t, 400, 400, sign).map_err(e)?;
        let sharded = mordell::search_points_sharded(&t, 400, 400, sign, 4).map_err(e)?;
        let mut parts = mordell::split_range(1..401, 4)
            .into_iter()
            .map(|r| mordell::search_points_in(&t, 400, r, sign))
            .collect::<Result<Vec<_>, _>>()
            .map_err(e)?;
        parts.reverse();
        let merged = mordell::merge_points(parts);
        ensure(whole == sharded && whole == merged, || format!("{t} {sign}: shard mismatch"))?;
        shard_runs += 1;
    }
    Ok(format!(
        "9/8 on (2,7,3), 9/1 on (2,3,7), 1+8=9 on (3,2,3), {inclusions} inclusions, {shard_runs} 4-way splits"
    ))
}

fn c9_identities() -> Check {
    let failures = symdiff::sweep_floor_ceil_identity(200, 50);
    ensure(failures.is_empty(), || format!("floor/ceil identity fails at {failures:?}"))?;
    for m in 1..=50u64 {
        for k in 0..=200u64 {
            // floor(k(m-1)/m) = k - ceil(k/m), in plain integers
            ensure(k * (m - 1) / m == k - k.div_ceil(m), || format!("k={k} m={m}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..300 {
        let ms: Vec<u64> = (0..rng.random_range(3..=6)).map(|_| rng.random_range(1..=9)).collect();
        let pair = PlaneArrangementPair::lines(ms.iter().map(|&m| int(m)));
        let l = ms.iter().fold(1u64, |acc, &m| acc.lcm(&m));
        let degree = l * rng.random_range(1..=4);
        let fd = pair.family_dimension(degree).map_err(|e| e.to_string())?;
        let minus_delta = ms.iter().fold(BigRational::from_integer(3.into()), |acc, &m| {
            acc - BigRational::one() + ratio(1, m as i64)
        });
        let oracle = minus_delta * BigInt::from(degree) - BigRational::one();
        ensure(oracle.is_integer() && BigRational::from_integer(fd.expected_dim.into()) == oracle && fd.identity_holds, || {
            format!("{ms:?} degree {degree}: {} vs {oracle}", fd.expected_dim)
        })?;
    }
    let fd = PlaneArrangementPair::lines([int(3), int(3), int(5), int(7)])
        .family_dimension(105)
        .map_err(|e| e.to_string())?;
    let pc = fd.period_count.ok_or("no period count for (3,3,5,7)")?;
    ensure(pc.differs() && pc.computed == 0 && pc.alternative_3n_minus_1 == 2, || format!("{pc:?}"))?;
    Ok("identity k<=200 m<=50, 300 arrangements, 3N-1 vs N-1 flagged".into())
}

fn c10_cli() -> Check {
    let cases = common::cases();
    ensure(!cases.is_empty(), || "empty golden corpus".into())?;
    let failed = common::check_all();
    ensure(failed.is_empty(), || format!("golden mismatches: {failed:?}"))?;
    let specs = common::valid_spec_files();
    for path in &specs {
        let (first, second, printed) = common::round_trip(path);
        ensure(first.decls == second.decls && second.to_string() == printed, || {
            format!("round trip of {}", path.display())
        })?;
    }
    let mut json_cases = 0;
    for name in cases.iter().filter(|n| n.ends_with("json")) {
        ensure(common::run_case(name) == common::run_case(name), || format!("{name} not stable"))?;
        json_cases += 1;
    }
    Ok(format!("{} golden cases, {} spec round trips, {json_cases} JSON cases", cases.len(), specs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "triangle-group trichotomy", Some(Duration::from_secs(1)), c1_trichotomy),
        (2, "Fano checks", Some(Duration::from_secs(1)), c2_fano),
        (3, "inf/gcd discrepancy", None, c3_inf_gcd),
        (4, "composition rule", Some(Duration::from_secs(10)), c4_composition),
        (5, "rational line families", Some(Duration::from_secs(5)), c5_line_families),
        (6, "floor lemmas", Some(Duration::from_secs(30)), c6_floor_lemmas),
        (7, "p-full arithmetic", Some(Duration::from_secs(60)), c7_p_full),
        (8, "Mordell searches", None, c8_mordell),
        (9, "identity suite", None, c9_identities),
        (10, "CLI golden corpus", None, c10_cli),
    ];
    let mut failures = 0;
    for (n, name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match (result, budget) {
            (Ok(detail), Some(b)) if elapsed > b => Err(format!("{detail}; took {elapsed:.2?}, budget {b:?}")),
            (r, _) => r,
        };
        match verdict {
            Ok(detail) => println!("PASS {n:>2} {name} ({elapsed:.2?}): {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL {n:>2} {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    if failures == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} of 10 criteria failed");
        ExitCode::FAILURE
    }
}
