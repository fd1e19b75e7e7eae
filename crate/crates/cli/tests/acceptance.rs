//! Acceptance suite: one pass/fail line per criterion, each with its runtime
//! budget. Runs without the test harness so the lines always reach stdout;
//! the process fails if any criterion fails.

use std::time::{Duration, Instant};

use num::{BigInt, BigRational, Integer, Signed, Zero};
use serde_json::Value;

use thompson_renorm::categories::{tree_count, Tree};
use thompson_renorm::evaluate::{closed_graph, coefficient, edge_coloring_count, face_coloring_count, value2_subgroup_test, Model};
use thompson_renorm::renorm::{bound_check, decay_profile, LoopParameter, Number};
use thompson_renorm::thompson::{random_f_with, rotation_element, seeded_rng, FElement};

/// Seed shared by every sampled criterion.
const SEED: u64 = 24301;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Runs the CLI in-process and parses its JSON report.
fn cli(args: &[&str]) -> Result<Value, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("thompson-renorm").chain(args.iter().copied());
    let code = thompson_renorm_cli::run(argv, &mut out, &mut err);
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    serde_json::from_slice(&out).map_err(|e| e.to_string())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, String> {
    v.get(key).ok_or_else(|| format!("missing field `{key}`"))
}

fn text<'a>(v: &'a Value, key: &str) -> Result<&'a str, String> {
    field(v, key)?.as_str().ok_or_else(|| format!("field `{key}` is not a string"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `count` elements of F, cycling the leaf count through `1..=max_leaves`.
fn sample(count: usize, max_leaves: usize, min_leaves: usize, seed: u64) -> Vec<FElement> {
    let mut rng = seeded_rng(seed);
    let span = max_leaves - min_leaves + 1;
    (0..count).map(|i| random_f_with(min_leaves + i % span, &mut rng)).collect()
}

/// Every reduced element whose trees have between 2 and `n` leaves.
fn all_pairs(n: usize) -> Vec<FElement> {
    let mut out = Vec::new();
    for leaves in 2..=n {
        let trees = Tree::enumerate(leaves);
        for a in &trees {
            for b in &trees {
                let g = FElement::reduce(a.clone(), b.clone()).expect("equal leaf counts");
                if g.leaves() == leaves {
                    out.push(g);
                }
            }
        }
    }
    out
}

fn criterion_1() -> Result<String, String> {
    let v = cli(&["renorm", "certify", "--d", "3"])?;
    let cert = field(&v, "certificate")?;
    let n = field(cert, "n")?.as_u64();
    let (k, mk, m) = (text(cert, "K")?, text(cert, "MK")?, text(&v, "M")?);
    ensure(n == Some(2) && k == "7/32" && m == "15/4" && mk == "105/128", || {
        format!("got n={n:?} K={k} M={m} MK={mk}")
    })?;
    Ok(format!("n=2 K={k} M={m} MK={mk}"))
}

fn criterion_2() -> Result<String, String> {
    let v = cli(&["renorm", "scan", "--variant", "both", "--m-from", "5", "--m-to", "20", "--d3", "--digits", "60", "--nmax", "64"])?;
    let rows = field(&v, "rows")?.as_array().ok_or("rows is not an array")?;
    ensure(rows.len() == 33, || format!("expected 33 rows (16 per variant and d = 3), got {}", rows.len()))?;
    let minus: Vec<&Value> = rows.iter().filter(|r| r["variant"] == "minus").collect();
    ensure(minus.len() == 16, || format!("expected 16 minus rows, got {}", minus.len()))?;
    for r in &minus {
        let m = r["m"].as_u64().ok_or("row without m")?;
        let certified = r["status"] == "certified";
        ensure(certified == (m >= 7), || format!("minus m={m}: status {}", r["status"]))?;
    }
    let m6 = minus.iter().find(|r| r["m"] == 6).ok_or("no m=6 row")?;
    ensure(m6["d"] == "2" && m6["exact"] == true, || format!("m=6 should give d = 2 exactly, got {}", m6["d"]))?;
    let verdict = text(&v, "verdict")?;
    ensure(verdict.starts_with("verdict: minus;"), || format!("verdict line: {verdict}"))?;
    ensure(v["d3_certified"] == true, || "d = 3 row not certified".into())?;
    Ok(verdict.to_string())
}

fn criterion_3() -> Result<String, String> {
    let mut notes = Vec::new();
    for d in [q(9, 4), q(3, 1), q(4, 1)] {
        let r = bound_check(&d, 100_000, SEED).map_err(|e| e.to_string())?;
        ensure(r.violations == 0, || format!("d={d}: {} violations", r.violations))?;
        ensure(r.expression_violations == 0, || format!("d={d}: {} bound-expression violations", r.expression_violations))?;
        ensure(r.extreme_max_at_b1, || format!("d={d}: extremes {:?} do not peak at ±b1 with M={}", r.extremes, r.m))?;
        notes.push(format!("d={d} M={} max={:.6}", r.m, ratio_f64(&r.max_norm)));
    }
    Ok(notes.join("; "))
}

fn ratio_f64(q: &BigRational) -> f64 {
    thompson_renorm::renorm::decimal_string(q, 12, false).parse().unwrap_or(f64::NAN)
}

fn criterion_4() -> Result<String, String> {
    let (cert, rows) = decay_profile(&LoopParameter::exact(q(3, 1)), 9).map_err(|e| e.to_string())?;
    let m = cert.m.value().clone();
    let mut worst = f64::INFINITY;
    for n in 3..=8 {
        let row = rows.iter().find(|r| r.n == n).ok_or_else(|| format!("no row n={n}"))?;
        let ratio = row.ratio.ok_or_else(|| format!("n={n}: ratio undefined"))?;
        ensure(ratio >= 1.9, || format!("n={n}: ratio {ratio}"))?;
        worst = worst.min(ratio);
        let k = row.k.value();
        let next = rows
            .iter()
            .find(|r| r.n == n + 1)
            .map(|r| r.k.value().clone())
            .ok_or_else(|| format!("no row n={}", n + 1))?;
        ensure(matches!(row.k, Number::Exact(_)), || format!("n={n}: K is not exact"))?;
        ensure(next <= &m * k * k, || format!("n={n}: K_(n+1) > M K_n^2"))?;
        ensure(row.bound_holds == Some(true), || format!("n={n}: reported bound flag disagrees"))?;
    }
    Ok(format!("min ratio over n=3..8 is {worst:.4}"))
}

fn criterion_5() -> Result<String, String> {
    let g = sample(500, 16, 1, SEED);
    for i in 0..g.len() {
        let (a, b, c) = (&g[i], &g[(i + 1) % g.len()], &g[(i + 2) % g.len()]);
        ensure(a.multiply(b).multiply(c) == a.multiply(&b.multiply(c)), || format!("associativity fails at {a}, {b}, {c}"))?;
        ensure(a.multiply(&a.inverse()).is_identity() && a.inverse().multiply(a).is_identity(), || format!("inverse fails at {a}"))?;
        ensure(a.multiply(b).to_pl_map() == a.to_pl_map().compose(&b.to_pl_map()), || format!("homomorphism fails at {a}, {b}"))?;
    }
    for n in 1..=6u32 {
        let r = rotation_element(1, n).map_err(|e| e.to_string())?;
        let order = 1i64 << n;
        ensure(r.pow(order).is_identity(), || format!("rotation 1/2^{n}: power {order} is not the identity"))?;
        let mut power = r.clone();
        for k in 1..order {
            ensure(!power.is_identity(), || format!("rotation 1/2^{n}: power {k} is the identity"))?;
            power = power.multiply(&r);
        }
    }
    Ok("500 elements, rotations n=1..6 have order 2^n".into())
}

fn criterion_6() -> Result<String, String> {
    let err = |e: thompson_renorm::evaluate::EvalError| e.to_string();
    let id = coefficient(&FElement::identity(), &Model::Edge3).map_err(err)?;
    ensure(id == q(1, 1), || format!("identity coefficient {id}"))?;
    let x0 = coefficient(&FElement::x0(), &Model::Edge3).map_err(err)?;
    ensure(x0 == q(1, 2), || format!("x0 coefficient {x0}"))?;
    let chromatic = Model::Chromatic(q(3, 1));
    for g in sample(100, 10, 1, SEED + 1) {
        let (c, e) = (coefficient(&g, &chromatic).map_err(err)?, coefficient(&g, &Model::Edge3).map_err(err)?);
        ensure(c == e, || format!("{g}: chromatic {c} vs edge {e}"))?;
    }
    Ok("identity=1, x0=1/2, 100 chromatic(3) = edge3".into())
}

fn criterion_7() -> Result<String, String> {
    let random = sample(200, 12, 2, SEED + 2);
    let exhaustive = all_pairs(5);
    let mut pool = random.clone();
    pool.extend(exhaustive.iter().cloned());
    let report = value2_subgroup_test(&pool);
    ensure(report.unexpected_counts.is_empty(), || format!("face counts outside {{0, 6}}: {:?}", report.unexpected_counts))?;
    ensure(report.members > 1 && report.products_checked > 0, || format!("only {} value-2 elements", report.members))?;
    ensure(report.passed(), || format!("closure fails: {:?} {:?}", report.product_failures, report.inverse_failures))?;
    let six = BigInt::from(6);
    let mut edge_checked = 0;
    for g in random.iter().chain(&exhaustive).filter(|g| g.leaves() >= 2) {
        let count = edge_coloring_count(&closed_graph(g), 3);
        ensure(count.is_positive() && count.is_multiple_of(&six), || format!("{g}: edge count {count}"))?;
        edge_checked += 1;
    }
    let zero_faces = pool.iter().filter(|g| face_coloring_count(&closed_graph(g), 3).is_zero()).count();
    Ok(format!(
        "{} elements ({} value-2, {} with no face coloring), {} products checked, {edge_checked} edge counts",
        pool.len(),
        report.members,
        zero_faces,
        report.products_checked
    ))
}

fn criterion_8() -> Result<String, String> {
    let catalan = [1u128, 1, 2, 5, 14, 42, 132, 429];
    for (i, &c) in catalan.iter().enumerate() {
        let n = i + 1;
        let found = Tree::enumerate(n).len() as u128;
        ensure(found == c && tree_count(n) == c, || format!("n={n}: {found} trees, expected {c}"))?;
    }
    let d = closed_graph(&FElement::x0());
    let vef = (d.vertex_count(), d.edge_count(), d.face_count());
    ensure(vef == (4, 6, 4), || format!("(V,E,F) = {vef:?}"))?;
    // K4: four vertices, each pair joined by exactly one edge
    let mut seen = std::collections::HashSet::new();
    for e in d.endpoints() {
        let (a, b) = (e[0].min(e[1]), e[0].max(e[1]));
        ensure(a != b && seen.insert((a, b)), || format!("edge {e:?} is a loop or repeated"))?;
    }
    ensure(seen.len() == 6, || "not complete on four vertices".into())?;
    Ok("Catalan through n=8, closed_graph(x0) = K4 (4,6,4)".into())
}

/// A named check with its runtime budget.
type Criterion = (&'static str, Duration, fn() -> Result<String, String>);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 certificate at d = 3", Duration::from_secs(1), criterion_1),
        ("2 parameter scan", Duration::from_secs(60), criterion_2),
        ("3 bound property", Duration::from_secs(60), criterion_3),
        ("4 decay profile at d = 3", Duration::from_secs(10), criterion_4),
        ("5 group laws", Duration::from_secs(30), criterion_5),
        ("6 coefficients", Duration::from_secs(60), criterion_6),
        ("7 coloring laws", Duration::from_secs(120), criterion_7),
        ("8 combinatorial baselines", Duration::from_secs(5), criterion_8),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(detail) if elapsed <= budget => format!("PASS {name} ({:.2?} of {budget:?}): {detail}", elapsed),
            Ok(detail) => format!("FAIL {name}: over budget ({elapsed:.2?} > {budget:?}): {detail}"),
            Err(why) => format!("FAIL {name} ({elapsed:.2?}): {why}"),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("{verdict}");
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

