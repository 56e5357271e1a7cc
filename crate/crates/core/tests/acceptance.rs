//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use ait_thermo::compose::{compose, power, vn_family};
use ait_thermo::machines::{
    builtin, complexity_upper, enumerate_domain, shortest_programs, EnumerationState, Machine,
    Outcome, Schedule,
};
use ait_thermo::randomness::{rest_bits, RealSource};
use ait_thermo::rigor::{field_ops, log2, pow2, FieldOp};
use ait_thermo::spectrum::{convolve_spectra, kraft_sum, spectrum_of};
use ait_thermo::thermo::{detect_divergence, evaluate, separate, Quantity, ThermoReport};
use ait_thermo::{
    is_prefix_free, BitString, Dyadic, DyadicInterval, Error, LengthSpectrum, Precision,
    Temperature,
};
use common::{covers, gap, long_division, q, Bracket};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome_ = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eps9() -> Precision {
    Precision::decimal(9)
}

fn temp(n: i64, d: i64) -> Temperature {
    Temperature::ratio(n, d).unwrap()
}

fn spectrum(name: &str) -> LengthSpectrum {
    builtin(name, &[]).unwrap().length_spectrum().unwrap()
}

fn report(spec: &LengthSpectrum, t: &Temperature) -> Result<ThermoReport, String> {
    evaluate(spec, t, eps9()).map_err(|e| format!("{t}: {e}"))
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome_) -> Outcome_ {
    let start = Instant::now();
    let out = f()?;
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:.2?}, limit {limit:.0?}"))?;
    Ok(out)
}

/// T = j/60 for j = 3..=52: fifty points in [1/20, 19/20] spaced 1/60.
fn grid50() -> Vec<Temperature> {
    (3..=52).map(|j| temp(j, 60)).collect()
}

fn criterion_1() -> Outcome_ {
    let one_sec = Duration::from_secs(1);
    timed(one_sec, || {
        let r = evaluate(&spectrum("B"), &Temperature::one(), Precision::from_bits(40))
            .map_err(|e| e.to_string())?;
        ensure(r.z == DyadicInterval::point(Dyadic::from_rational_exact(&q(3, 4)).unwrap()), || {
            format!("Z_B(1) = {:?}", r.z)
        })?;
        Ok(String::new())
    })?;
    timed(one_sec, || {
        let r = report(&spectrum("O"), &Temperature::one())?;
        ensure(r.z.contains(&Dyadic::one()) && r.z.width() <= eps9().eps(), || {
            format!("Z_O(1) = {}", r.z.to_decimal(15))
        })?;
        Ok(String::new())
    })?;
    timed(one_sec, || {
        let r = report(&spectrum("O"), &temp(1, 2))?;
        ensure(r.z.contains_rational(&q(1, 3)) && r.z.width() <= eps9().eps(), || {
            format!("Z_O(1/2) = {}", r.z.to_decimal(15))
        })?;
        Ok(String::new())
    })?;
    Ok("Z_B(1) = [3/4, 3/4]; Z_O(1) encloses 1; Z_O(1/2) encloses 1/3".into())
}

fn criterion_2() -> Outcome_ {
    timed(Duration::from_secs(30), || {
        let mut checks = 0;
        for (name, oracle) in [
            ("B", common::machine_b as fn(&BigRational, u32) -> common::ClosedForm),
            ("O", common::machine_o),
        ] {
            let spec = spectrum(name);
            for t in grid50() {
                let r = report(&spec, &t)?;
                let cf = oracle(t.value(), 100);
                for qty in Quantity::ALL {
                    let iv = r.get(qty);
                    ensure(iv.width() <= eps9().eps(), || format!("{name} {qty} at {t}: too wide"))?;
                    let b = cf.get(qty.symbol());
                    ensure(covers(iv, b), || {
                        format!("{name} {qty} at {t}: {} misses closed form", iv.to_decimal(15))
                    })?;
                    checks += 1;
                }
            }
        }
        Ok(format!("{checks} enclosures contain the closed forms"))
    })
}

fn criterion_3() -> Outcome_ {
    timed(Duration::from_secs(120), || {
        let names = ["B", "O", "heavy_tail"];
        let temps: Vec<Temperature> = (1..=20).map(|k| temp(k, 21)).collect();
        let mut worst_z: f64 = 0.0;
        let mut worst_sum: f64 = 0.0;
        let mut pairs = 0;
        for i in 0..names.len() {
            for j in i..names.len() {
                pairs += 1;
                let (a, b) = (spectrum(names[i]), spectrum(names[j]));
                let ab = convolve_spectra(&a, &b);
                for t in &temps {
                    let (ra, rb, rab) = (report(&a, t)?, report(&b, t)?, report(&ab, t)?);
                    let prod = field_ops(&ra.z, &rb.z, FieldOp::Mul, 64).map_err(|e| e.to_string())?;
                    let gz = gap(&rab.z, &prod);
                    ensure(gz <= 1e-9, || format!("{}⊘{} Z at {t}: gap {gz:e}", names[i], names[j]))?;
                    worst_z = worst_z.max(gz);
                    for qty in [Quantity::F, Quantity::E, Quantity::S] {
                        let sum = field_ops(ra.get(qty), rb.get(qty), FieldOp::Add, 64)
                            .map_err(|e| e.to_string())?;
                        let g = gap(rab.get(qty), &sum);
                        ensure(g <= 1e-8, || {
                            format!("{}⊘{} {qty} at {t}: gap {g:e}", names[i], names[j])
                        })?;
                        worst_sum = worst_sum.max(g);
                    }
                }
            }
        }
        Ok(format!(
            "{pairs} pairs x 20 temperatures; max Z gap {worst_z:e}, max F/E/S gap {worst_sum:e}"
        ))
    })
}

fn criterion_4() -> Outcome_ {
    timed(Duration::from_secs(60), || {
        let mut refined = 0;
        let mut compared = 0;
        for name in ["B", "O", "heavy_tail"] {
            let spec = spectrum(name);
            let grid = grid50();
            let reports: Vec<ThermoReport> = grid
                .iter()
                .map(|t| report(&spec, t))
                .collect::<Result<_, _>>()?;
            for k in 1..grid.len() {
                for qty in Quantity::ALL {
                    let (lo, hi) = (reports[k - 1].get(qty), reports[k].get(qty));
                    let want_increase = qty != Quantity::F;
                    let separated = if want_increase {
                        lo.strictly_below(hi)
                    } else {
                        hi.strictly_below(lo)
                    };
                    compared += 1;
                    if separated {
                        continue;
                    }
                    refined += 1;
                    let order = separate(&spec, &grid[k - 1], &grid[k], qty, Precision::from_bits(60), 480)
                        .map_err(|e| e.to_string())?;
                    let want = if want_increase {
                        std::cmp::Ordering::Less
                    } else {
                        std::cmp::Ordering::Greater
                    };
                    ensure(order == Some(want), || {
                        format!("{name} {qty} between {} and {}: {order:?}", grid[k - 1], grid[k])
                    })?;
                }
            }
        }
        Ok(format!("{compared} adjacent comparisons, {refined} needed refinement"))
    })
}

fn criterion_5() -> Outcome_ {
    timed(Duration::from_secs(10), || {
        let l = detect_divergence(&spectrum("heavy_tail"), &temp(5, 4), &q(1000, 1))
            .map_err(|e| e.to_string())?;
        ensure(l <= 300, || format!("heavy_tail crossed 10^3 only at L = {l}"))?;
        match detect_divergence(&spectrum("O"), &temp(5, 4), &q(1_000_000, 1)) {
            Err(e @ Error::BudgetExhausted { certificate: Some(_), .. }) => {
                Ok(format!("heavy_tail Z_L > 10^3 at L = {l}; O: {e}"))
            }
            other => Err(format!("O at T = 5/4: {other:?}")),
        }
    })
}

/// Random complete prefix code with `leaves` words, by splitting leaves.
fn random_table(rng: &mut ChaCha8Rng, leaves: usize, name: &str) -> Machine {
    let mut words: Vec<BitString> = vec!["0".parse().unwrap(), "1".parse().unwrap()];
    while words.len() < leaves {
        let i = rng.gen_range(0..words.len());
        let w = words.swap_remove(i);
        let mut a = w.clone();
        a.push(false);
        let mut b = w;
        b.push(true);
        words.push(a);
        words.push(b);
    }
    // drop a few words so the Kraft sum is sometimes below one
    let keep = rng.gen_range(1..=words.len());
    words.truncate(keep);
    let entries = words
        .into_iter()
        .map(|w| {
            let out = BitString::from_index(rng.gen_range(0..4), rng.gen_range(0..3));
            (w, out)
        })
        .collect();
    Machine::table(name, entries).unwrap()
}

fn table_corpus() -> Vec<Machine> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut corpus = vec![
        builtin("B", &[]).unwrap(),
        Machine::from_domain("O3", &["1", "01", "001"].map(|s| s.parse().unwrap())).unwrap(),
        Machine::table(
            "stairs",
            vec![
                ("1".parse().unwrap(), BitString::empty()),
                ("01".parse().unwrap(), "0".parse().unwrap()),
                ("001".parse().unwrap(), "00".parse().unwrap()),
            ],
        )
        .unwrap(),
    ];
    for i in 0..20 {
        let leaves = rng.gen_range(2..=12);
        corpus.push(random_table(&mut rng, leaves, &format!("T{i}")));
    }
    corpus
}

fn criterion_6() -> Outcome_ {
    let corpus = table_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0106);
    let mut composites = 0;
    let mut programs = 0u128;
    let mut candidates: Vec<Vec<Machine>> = Vec::new();
    for a in &corpus {
        for b in &corpus {
            candidates.push(vec![a.clone(), b.clone()]);
        }
    }
    for _ in 0..200 {
        let n = rng.gen_range(3..=4);
        candidates.push((0..n).map(|_| corpus[rng.gen_range(0..corpus.len())].clone()).collect());
    }
    for factors in candidates {
        let c = compose(&factors).map_err(|e| e.to_string())?;
        let size = c.domain_size().unwrap();
        if size > 10_000 {
            continue;
        }
        let domain = c.materialize_domain(10_000).map_err(|e| e.to_string())?;
        ensure(is_prefix_free(domain.members()), || format!("{} not prefix-free", c.name()))?;
        let expected = factors
            .iter()
            .map(|f| f.length_spectrum().unwrap())
            .reduce(|x, y| convolve_spectra(&x, &y))
            .unwrap();
        ensure(spectrum_of(&domain) == expected, || format!("{}: spectra differ", c.name()))?;
        composites += 1;
        programs += size;
    }
    let b = builtin("B", &[]).unwrap();
    let p2 = power(&b, 2).unwrap().length_spectrum().unwrap();
    ensure(p2 == LengthSpectrum::from_pairs(&[(2, 1), (3, 2), (4, 1)]).unwrap(), || {
        format!("power(B, 2) = {p2:?}")
    })?;
    let p3 = power(&b, 3).unwrap();
    let k = kraft_sum(&p3.length_spectrum().unwrap(), Precision::from_bits(8)).unwrap();
    ensure(k.is_point() && k.contains_rational(&q(27, 64)), || format!("Kraft(B^3) = {k:?}"))?;
    let words = p3.materialize(8).unwrap();
    let brute: BigRational = words.iter().map(|(w, _)| common::two_pow(-(w.len() as i64))).sum();
    ensure(words.len() == 8 && brute == q(27, 64), || "brute-force Kraft of B^3".into())?;
    Ok(format!(
        "{composites} composites ({programs} programs) match convolution; B^2, B^3 exact"
    ))
}

fn criterion_7() -> Outcome_ {
    let u = builtin("U", &[]).unwrap();
    let state = enumerate_domain(&u, EnumerationState::new(&u, Schedule::Doubling), 200_000)
        .map_err(|e| e.to_string())?;
    let v = state.to_table_machine().map_err(|e| e.to_string())?;
    let o = builtin("O", &[]).unwrap();
    let t = temp(1, 2);
    let ro = report(&o.length_spectrum().unwrap(), &t)?;
    let mut reports = BTreeMap::new();
    for n in 1..=3u32 {
        let vn = vn_family(&v, &o, n).map_err(|e| e.to_string())?;
        reports.insert(n, report(&vn.length_spectrum().unwrap(), &t)?);
    }
    let mut worst: f64 = 0.0;
    for n in 1..=3u32 {
        for m in (n + 1)..=3u32 {
            let k = (m - n) as i64;
            let mut z = reports[&n].z.clone();
            for _ in 0..k {
                z = z.mul(&ro.z);
            }
            let g = gap(&reports[&m].z, &z);
            ensure(g <= 1e-9, || format!("Z_V{m} vs Z_V{n} Z_O^{k}: gap {g:e}"))?;
            worst = worst.max(g);
            for qty in [Quantity::F, Quantity::E, Quantity::S] {
                let diff = reports[&m].get(qty).sub(reports[&n].get(qty));
                let expect = ro.get(qty).mul(&DyadicInterval::from_int(k));
                let g = gap(&diff, &expect);
                ensure(g <= 1e-8, || format!("{qty}_V{m} - {qty}_V{n}: gap {g:e}"))?;
                worst = worst.max(g);
            }
        }
    }
    Ok(format!(
        "V = U at budget {} ({} programs, lower bounds); max gap {worst:e}",
        state.budget(),
        state.discovered().len()
    ))
}

fn brute_force_h(m: &Machine, s: &BitString, max_len: u32) -> Option<u32> {
    for len in 1..=max_len {
        for idx in 0..(1u64 << len) {
            if m.run(&BitString::from_index(idx, len), 1).unwrap() == Outcome::Halted(s.clone()) {
                return Some(len);
            }
        }
    }
    None
}

fn criterion_8() -> Outcome_ {
    let mut checked = 0;
    for m in table_corpus() {
        let table = m.table_entries().unwrap();
        let max_len = table.keys().map(|k| k.len() as u32).max().unwrap();
        let mut targets: Vec<BitString> = table.values().cloned().collect();
        targets.push("111".parse().unwrap());
        for s in targets {
            let got = match complexity_upper(&m, &s, max_len, 1) {
                Ok(h) => Some(h),
                Err(Error::NotFound) => None,
                Err(e) => return Err(e.to_string()),
            };
            let want = brute_force_h(&m, &s, max_len);
            ensure(got == want, || format!("{}: H({s}) = {got:?}, brute force {want:?}", m.name()))?;
            checked += 1;
        }
    }
    let u = builtin("U", &[]).unwrap();
    let budgets = [4u64, 16, 64, 256, 1024];
    let targets: Vec<BitString> = ["", "0", "1", "00", "01", "10", "11", "000", "0000"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let mut prev: Option<Vec<Option<u32>>> = None;
    let mut last = Vec::new();
    for steps in budgets {
        let table = shortest_programs(&u, 14, steps).map_err(|e| e.to_string())?;
        let row: Vec<Option<u32>> = targets.iter().map(|s| table.get(s).copied()).collect();
        if let Some(p) = &prev {
            for (i, (a, b)) in p.iter().zip(&row).enumerate() {
                let worse = match (a, b) {
                    (Some(x), Some(y)) => y > x,
                    (Some(_), None) => true,
                    _ => false,
                };
                ensure(!worse, || format!("H_U({}) increased at {steps} steps", targets[i]))?;
            }
        }
        prev = Some(row.clone());
        last = row;
    }
    let shown: Vec<String> = targets
        .iter()
        .zip(&last)
        .map(|(s, h)| {
            let s = if s.is_empty() { "λ".to_string() } else { s.to_string() };
            h.map_or(format!("{s}:-"), |h| format!("{s}:{h}"))
        })
        .collect();
    Ok(format!(
        "{checked} table complexities exact; U bounds nonincreasing over 5 budgets ({})",
        shown.join(" ")
    ))
}

fn criterion_9() -> Outcome_ {
    let got = rest_bits(&RealSource::rational(5, 8).unwrap(), 6).map_err(|e| e.to_string())?;
    ensure(got.to_string() == "101000", || format!("rest_bits(5/8, 6) = {got}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    for _ in 0..100 {
        let j = rng.gen_range(0..20u32);
        let k: i64 = rng.gen_range(-(1i64 << 24)..(1i64 << 24));
        let n = j + rng.gen_range(1..30u32);
        let alpha = RealSource::Rational(BigRational::new(k.into(), BigInt::one() << j));
        let bits = rest_bits(&alpha, n).map_err(|e| e.to_string())?.to_string();
        // oracle: the j fractional digits of k/2^j, then zeros
        let frac = k.rem_euclid(1i64 << j);
        let expect = format!(
            "{}{}",
            if j == 0 { String::new() } else { format!("{frac:0width$b}", width = j as usize) },
            "0".repeat((n - j) as usize)
        );
        ensure(bits == expect, || format!("rest_bits({k}/2^{j}, {n}) = {bits}, expected {expect}"))?;
    }
    let third = rest_bits(&RealSource::rational(1, 3).unwrap(), 32)
        .map_err(|e| e.to_string())?
        .to_string();
    ensure(third == long_division(1, 3, 32), || format!("rest_bits(1/3, 32) = {third}"))?;
    Ok("101000 exact; 100 dyadics end in zeros; 1/3 matches long division".into())
}

fn random_dyadic(rng: &mut ChaCha8Rng) -> Dyadic {
    Dyadic::new(BigInt::from(rng.gen_range(-(1i64 << 40)..(1i64 << 40))), rng.gen_range(-60..10))
}

fn random_interval(rng: &mut ChaCha8Rng) -> DyadicInterval {
    let (a, b) = (random_dyadic(rng), random_dyadic(rng));
    if a <= b {
        DyadicInterval::new(a, b)
    } else {
        DyadicInterval::new(b, a)
    }
}

fn criterion_10() -> Outcome_ {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let eps = Precision::from_bits(48);
    let mut nested = 0;
    for i in 0..1000 {
        // pow2 on p/d
        let e = q(rng.gen_range(-200..=200), rng.gen_range(1..=64));
        let iv = pow2(&e, eps);
        // relative oracle bits must also cover the magnitude 2^⌊e⌋
        let magnitude = e.floor().to_integer().try_into().unwrap_or(0i64).max(0) as u32;
        let oracle = common::pow2_bracket(&e, 120 + magnitude);
        ensure(covers(&iv, &oracle), || format!("pow2({e}) = {iv:?}"))?;

        // log2 of a positive rational, through its enclosure
        let x = q(rng.gen_range(1..=1_000_000), rng.gen_range(1..=1_000_000));
        let xi = DyadicInterval::from_rational(&x, 80);
        let li = log2(&xi, eps).map_err(|e| e.to_string())?;
        let ol = common::log2_point(&x, 120);
        ensure(covers(&li, &ol), || format!("log2({x}) = {li:?}"))?;

        // field operations against exact corner arithmetic
        let (a, b) = (random_interval(&mut rng), random_interval(&mut rng));
        let op = [FieldOp::Add, FieldOp::Sub, FieldOp::Mul, FieldOp::Div][i % 4];
        let corners = |f: &dyn Fn(&BigRational, &BigRational) -> BigRational| {
            let xs = [a.lo().to_rational(), a.hi().to_rational()];
            let ys = [b.lo().to_rational(), b.hi().to_rational()];
            let vals: Vec<BigRational> =
                xs.iter().flat_map(|x| ys.iter().map(move |y| f(x, y))).collect();
            Bracket {
                lo: vals.iter().min().unwrap().clone(),
                hi: vals.iter().max().unwrap().clone(),
            }
        };
        let exact = match op {
            FieldOp::Add => Some(corners(&|x, y| x + y)),
            FieldOp::Sub => Some(corners(&|x, y| x - y)),
            FieldOp::Mul => Some(corners(&|x, y| x * y)),
            FieldOp::Div => {
                if b.contains_zero() {
                    None
                } else {
                    Some(corners(&|x, y| x / y))
                }
            }
        };
        let got = field_ops(&a, &b, op, 40);
        match exact {
            Some(range) => {
                let got = got.map_err(|e| e.to_string())?;
                ensure(covers(&got, &range), || format!("{op:?} {a:?} {b:?} = {got:?}"))?;
            }
            None => ensure(got == Err(Error::DivisionByZeroInterval), || {
                format!("{op:?} by {b:?} should fail")
            })?,
        }

        if i % 10 == 0 {
            let levels = [16u32, 40, 90];
            let ps: Vec<_> = levels.iter().map(|&k| pow2(&e, Precision::from_bits(k))).collect();
            let ls: Vec<_> = levels
                .iter()
                .map(|&k| log2(&xi, Precision::from_bits(k)).unwrap())
                .collect();
            for w in [&ps, &ls] {
                ensure(w[0].contains_interval(&w[1]) && w[1].contains_interval(&w[2]), || {
                    format!("not nested: {w:?}")
                })?;
            }
            if !(op == FieldOp::Div && b.contains_zero()) {
                let fs: Vec<_> = [8i64, 30, 70]
                    .iter()
                    .map(|&k| field_ops(&a, &b, op, k).unwrap())
                    .collect();
                ensure(fs[0].contains_interval(&fs[1]) && fs[1].contains_interval(&fs[2]), || {
                    format!("field_ops not nested: {fs:?}")
                })?;
            }
            nested += 1;
        }
    }
    Ok(format!(
        "1000 inputs each for pow2, log2, field_ops contained; {nested} nested-precision checks"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome_); 10] = [
        ("exact rational anchors", criterion_1),
        ("closed-form conformance grid", criterion_2),
        ("extensivity laws", criterion_3),
        ("monotonicity in T", criterion_4),
        ("divergence demonstration", criterion_5),
        ("composition correctness", criterion_6),
        ("V_n family identities", criterion_7),
        ("complexity exactness", criterion_8),
        ("bit extraction", criterion_9),
        ("interval soundness", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| f == &id.to_string()) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {id:>2} PASS ({took:.2?}) {title}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL ({took:.2?}) {title}: {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
