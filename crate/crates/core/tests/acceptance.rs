//! The ten acceptance criteria, one line each; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayclass::bounds::{hbar, oesterle_nbar, theta, theta_inv, QSqrtNum};
use rayclass::curve::{BiPoly, PlaceSpec, PlaneCurve};
use rayclass::ffield::{prime_power, FieldCtx, Fq};
use rayclass::harness::output::write_report;
use rayclass::harness::table::lambda_reaching;
use rayclass::harness::verify::{census_check, example_ground};
use rayclass::harness::{
    generate_table, verify, Format, GoldenCorpus, Ground, RationalOracle, RowClass, RowGroup, RowStatus, SetFamily,
    VerifyOptions,
};
use rayclass::lambda::{Description, LambdaSeq};
use rayclass::method_a::{initials, lambda_seq_a, orbit_lengths, RationalSet};
use rayclass::method_b::{describe_units, factor_vector, lambda_seq_b, round_exp, UnitSystem};
use rayclass::raygenus::{genus_l, genus_via_different, genus_via_discriminant, hayes_degree, hayes_genus, CyclePart};
use rayclass::sunits::{hnf_with, lattice_index, to_big, LatticeIndex, PivotOrder, Residues};

type Check = Result<(), String>;

/// Name, check and time limit.
type Criterion = (&'static str, fn() -> Check, Duration);

const CURVE: &str = include_str!("../data/example_curve.txt");
const UNITS: &str = include_str!("../data/example_units.txt");

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn exact_bound() -> Check {
    let h = hbar(2, 2, 5).map_err(err)?;
    let want = QSqrtNum::from_parts(2503, 2911, 960, 2911, 2);
    ensure(h == want, || format!("hbar(2,2,5) = {h}"))?;
    ensure(h.cmp_int(2).is_lt(), || "hbar(2,2,5) is not below 2".into())
}

fn oesterle() -> Check {
    ensure(oesterle_nbar(4, 67) == 117, || format!("oesterle_nbar(4,67) = {}", oesterle_nbar(4, 67)))?;
    ensure(oesterle_nbar(2, 10) == 13, || format!("oesterle_nbar(2,10) = {}", oesterle_nbar(2, 10)))?;
    let mut worst = 0f64;
    for q in [2u64, 3, 4, 5] {
        for k in 0..100i64 {
            let t = QSqrtNum::from_parts(k, 100, 0, 1, q);
            let n = theta_inv(q, &t).map_err(err)?.to_f64();
            worst = worst.max((theta(q, n).map_err(err)? - k as f64 / 100.0).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("theta round trip error {worst:e}"))
}

fn class_number() -> Check {
    let c = PlaneCurve::parse(CURVE).map_err(err)?;
    let got = (c.class_number().map_err(err)?, c.count_points(1).map_err(err)?, c.count_points(2).map_err(err)?);
    ensure(got == (13, 5, 5), || format!("(h, N1, N2) = {got:?}"))
}

fn lattice() -> Check {
    let d = to_big(&[vec![-2, 1, 0, 0, 1], vec![-2, 0, 1, 1, 0], vec![-5, 0, 2, 0, 3], vec![-5, 0, 0, 3, 2]]);
    let index = lattice_index(&d, &[1; 5]).map_err(err)?;
    ensure(index == LatticeIndex::Finite(BigInt::from(13)), || format!("index {index}"))?;
    let r = hnf_with(&d, PivotOrder::RightToLeft, Residues::Symmetric);
    let want = to_big(&[vec![-13, 13, 0, 0, 0], vec![-6, 5, 1, 0, 0], vec![4, -5, 0, 1, 0]]);
    ensure(r.h[..3] == want[..], || format!("HNF rows {:?}", &r.h[..3]))
}

fn method_b_example() -> Check {
    let c = PlaneCurve::parse(CURVE).map_err(err)?;
    let f = c.field();
    let place = PlaceSpec::affine(Fq::ZERO, Fq::ZERO);
    let my = factor_vector(&c, &place, &BiPoly::parse(f, "y").map_err(err)?, 3, 6).map_err(err)?;
    let mw = factor_vector(&c, &place, &BiPoly::parse(f, "y+x^2").map_err(err)?, 2, 6).map_err(err)?;
    ensure(my.to_string() == "(2,1,1)" && mw.to_string() == "(1,1,0)", || format!("mu vectors {my}, {mw}"))?;
    let units = UnitSystem::parse(f, UNITS).map_err(err)?;
    let d2 = describe_units(&c, &place, &units.prefix(2), None).map_err(err)?.description;
    let d3 = describe_units(&c, &place, &units, None).map_err(err)?.description;
    ensure(d2.to_string() == "t^2 + t^5" && d3.to_string() == "t + t^3 + t^5", || format!("descriptions {d2}, {d3}"))?;
    let l2 = lambda_seq_b(&d2, 2, 1, 14);
    let l3 = lambda_seq_b(&d3, 2, 1, 14);
    ensure(l2.from_one() == [0, 1, 1, 2, 2, 2, 3, 4, 4, 5, 5, 6, 7, 8], || format!("lambda_S2 {:?}", l2.from_one()))?;
    ensure(l3.from_one() == [0, 0, 0, 0, 0, 0, 0, 1, 1, 2, 2, 3, 3, 4], || format!("lambda_S3 {:?}", l3.from_one()))
}

fn example_table() -> Check {
    let rows = generate_table(&Ground::Curve(Box::new(example_ground().map_err(err)?)), 1..=9).map_err(err)?;
    let g: Vec<u64> = rows.iter().map(|r| r.g).collect();
    let n: Vec<u64> = rows.iter().map(|r| r.n_lower).collect();
    ensure(g == [4, 10, 28, 68, 164, 388, 868, 1892, 4068], || format!("genera {g:?}"))?;
    ensure(n == [7, 13, 25, 49, 97, 193, 385, 769, 1537], || format!("counts {n:?}"))
}

fn rational_tables() -> Check {
    let opts = VerifyOptions {
        groups: vec![RowGroup::RationalPrime, RowGroup::RationalQ4],
        census: false,
        ..Default::default()
    };
    let report = verify(&GoldenCorpus::bundled(), &opts).map_err(err)?;
    let bad: Vec<String> = report
        .rows
        .iter()
        .filter(|o| o.status != RowStatus::Pass)
        .map(|o| format!("q={} g={}: {}", o.row.q, o.row.g, o.detail))
        .collect();
    ensure(bad.is_empty() && report.passed == 65, || format!("{} passed; {}", report.passed, bad.join("; ")))?;
    let spot = report.rows.iter().find(|o| (o.row.q, o.row.l, o.row.s) == (3, 5, 3));
    let got = spot.and_then(|o| o.computed.as_ref()).map(|t| (t.g, t.n_lower));
    ensure(got == Some((987, 730)), || format!("q=3, l=5, |S|=3 gives {got:?}"))
}

fn census_q16() -> Check {
    let c = census_check().map_err(err)?;
    ensure(c.pass && c.method_a + c.method_b_only.len() == 37, || {
        format!("{} by A, {} more by B, missing {:?}, unexpected {:?}", c.method_a, c.method_b_only.len(), c.missing, c.unexpected)
    })
}

/// Sets with `0` in `S` and, from size two on, `1` in `A_S`.
fn normalized_sets(q: u32) -> Vec<Vec<u32>> {
    let free = q.saturating_sub(2);
    let mut out = vec![Vec::new()];
    for mask in 0u64..1 << free {
        let mut exps: Vec<u32> = (1..q - 1).filter(|j| mask >> (j - 1) & 1 == 1).collect();
        exps.push(q - 1);
        out.push(exps);
    }
    out
}

fn round_exp_sums() -> Check {
    for p in [2u64, 3, 5, 7] {
        for n in 1..=200u64 {
            let s: u64 = (1..=n).filter(|j| j % p != 0).map(|j| u64::from(round_exp(n, j, p))).sum();
            ensure(s == n - 1, || format!("round_exp sum p={p} n={n} is {s}"))?;
        }
    }
    Ok(())
}

fn methods_agree() -> Check {
    for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        let ctx = FieldCtx::with_order(u64::from(q)).map_err(err)?;
        let mut oracle = RationalOracle::new(ctx.clone());
        for exps in normalized_sets(q) {
            let set = RationalSet::from_exponents(&ctx, &exps).map_err(err)?;
            let (_, a) = lambda_seq_a(&ctx, &set, 24);
            let desc = oracle.description_b(&set).map_err(err)?;
            let b = lambda_seq_b(&desc, ctx.p(), ctx.e(), 24);
            let upto = a.computed_to();
            ensure(a.values()[..=upto] == b.values()[..=upto], || format!("q={q} I_S={exps:?}"))?;
        }
    }
    Ok(())
}

fn two_path_genus(lam: &LambdaSeq, g_k: u64, l: u32, what: &str) -> Check {
    let a = genus_l(g_k, 1, lam, l).map_err(err)?;
    let b = genus_via_discriminant(g_k, 1, lam, l).map_err(err)?;
    let c = genus_via_different(g_k, 1, lam, l).map_err(err)?;
    ensure(a == b && b == c, || format!("{what}, l={l}: {a} / {b} / {c}"))
}

fn generated_rows_genus() -> Check {
    let mut grounds: Vec<Ground> = [2u32, 3, 4, 5, 7, 8, 9]
        .into_iter()
        .map(|q| Ground::Rational { q, family: SetFamily::Sizes((1..=q).collect()) })
        .collect();
    grounds.push(Ground::Curve(Box::new(example_ground().map_err(err)?)));
    for ground in &grounds {
        for row in generate_table(ground, 1..=6).map_err(err)? {
            row.revalidate().map_err(err)?;
            let desc = Description::parse(&row.description).ok_or("unparsable description")?;
            let (p, e) = prime_power(u64::from(row.q)).ok_or("bad q")?;
            let lam = lambda_reaching(&desc, p, e, row.l);
            two_path_genus(&lam, row.g_k, row.l, &format!("q={} |S|={}", row.q, row.s1))?;
        }
    }
    Ok(())
}

fn orbit_clauses() -> Check {
    for q in [4u64, 8, 9, 16, 25, 27, 32] {
        let f = FieldCtx::with_order(q).map_err(err)?;
        let (p, e) = (u64::from(f.p()), f.e());
        let lengths = orbit_lengths(&f);
        let ev = |n: u64| if n < q { lengths[n as usize] } else { 0 };
        let inits: Vec<u64> = initials(&f).iter().map(|x| u64::from(x.0)).collect();
        let deg = |n: u64| -> u64 { (1..n.min(q)).map(|m| u64::from(ev(m))).sum() };
        let fail = |what: &str, n: u64| format!("q={q} n={n}: {what}");
        for n in 1..=q + 2 {
            ensure((deg(n) == q - 1) == (n >= q), || fail("full degree", n))?;
            let one_missing = deg(n) == q - 2 && inits.iter().all(|&m| m == q - 1 || m < n) && n < q;
            ensure(one_missing == (q - q / p <= n && n < q), || fail("one initial missing", n))?;
            if n % p == 0 && n <= q {
                ensure(ev(n) == 0, || fail("p | n", n))?;
            }
        }
        let (r, full_to, half) = if e % 2 == 0 {
            let r = p.pow(e / 2);
            (r, 2 * r, Some(r + 1))
        } else {
            (p.pow(e.div_ceil(2)), p.pow(e.div_ceil(2)), None)
        };
        for n in (1..=full_to).filter(|n| n % p != 0 && Some(*n) != half) {
            ensure(ev(n) == e, || fail("full orbit", n))?;
        }
        match half {
            Some(h) => {
                ensure(ev(h) == e / 2, || fail("half orbit", h))?;
                ensure(ev(2 * r + 1) == 0, || fail("beyond 2r", 2 * r + 1))?;
            }
            None => {
                for n in r..=r + p {
                    ensure(ev(n) == 0, || fail("gap after r", n))?;
                }
            }
        }
    }
    Ok(())
}

fn hayes_agreement() -> Check {
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let ctx = FieldCtx::with_order(u64::from(q)).map_err(err)?;
        let single = RationalSet::from_exponents(&ctx, &[]).map_err(err)?;
        let (_, lam) = lambda_seq_a(&ctx, &single, 12);
        for n in 1..=12u32 {
            let cycle = [CyclePart { degree: 1, mult: n }];
            let deg = hayes_degree(u64::from(q), 1, &cycle, 1).map_err(err)?;
            let lam_n = lam.value(n as usize).ok_or("short sequence")?;
            ensure(deg == i128::from(ctx.p()).pow(lam_n), || format!("q={q} n={n}: degree {deg}"))?;
            if n > 1 {
                let l = (n - 1) * ctx.e();
                let g = hayes_genus(u64::from(q), &cycle, 1, 0).map_err(err)?;
                ensure(g == genus_l(0, 1, &lam, l).map_err(err)?, || format!("q={q} n={n}: genus {g}"))?;
            }
        }
    }
    Ok(())
}

fn property_suites() -> Check {
    round_exp_sums()?;
    methods_agree()?;
    generated_rows_genus()?;
    orbit_clauses()?;
    hayes_agreement()
}

fn excluded_rows() -> Check {
    let corpus = GoldenCorpus::bundled();
    let external = corpus.rows.iter().filter(|r| r.class() == RowClass::External).count();
    let only: Vec<_> = corpus.rows.iter().filter(|r| r.class() == RowClass::External).cloned().collect();
    let report = verify(&GoldenCorpus { rows: only }, &VerifyOptions { census: false, ..Default::default() }).map_err(err)?;
    ensure(external > 0 && report.excluded == external && report.failed == 0 && report.passed == 0, || {
        format!("{external} external rows, report excluded {}", report.excluded)
    })?;
    let mut text = Vec::new();
    write_report(&report, Format::Text, &mut text).map_err(err)?;
    let text = String::from_utf8(text).map_err(err)?;
    ensure(text.contains(&format!("{external} excluded")), || "report omits the excluded count".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact class-number bound", exact_bound, Duration::from_secs(1)),
        ("explicit-formula bound and theta inverse", oesterle, Duration::from_secs(5)),
        ("class number of the genus-2 curve", class_number, Duration::from_secs(1)),
        ("unit lattice index and normal form", lattice, Duration::from_secs(1)),
        ("one-unit vectors and descriptions", method_b_example, Duration::from_secs(2)),
        ("genus-2 ground table", example_table, Duration::from_secs(2)),
        ("rational tables over prime fields and F_4", rational_tables, Duration::from_secs(30)),
        ("description census over F_16", census_q16, Duration::from_secs(300)),
        ("property suites", property_suites, Duration::MAX),
        ("external rows reported as excluded", excluded_rows, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let verdict = match (&result, took <= limit) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (took longer than {limit:?})"),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {:>2}: {verdict:<4} {name} [{:.2?}]", i + 1, took);
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
