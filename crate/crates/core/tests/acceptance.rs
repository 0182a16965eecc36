//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use stair::bench;
use stair::reliability::{
    analyze, closed_form, num_arrays, p_str, ChunkFailureDist, CodeSpec, Coverage, ReliabilityParams, SectorModel,
};
use stair::sim::simulate;
use stair::stair::{pattern_within_coverage, Strategy};
use stair::{Cell, FailurePattern, Method, StairCode, StairConfig, Stripe};

type Outcome = Result<String, String>;
type Visit<'a> = &'a mut dyn FnMut(&[(usize, u32)]) -> Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn code(n: usize, r: usize, m: usize, e: &[usize]) -> StairCode {
    StairCode::new(StairConfig::new(n, r, m, e, 8).unwrap()).unwrap()
}

fn random_stripe(code: &StairCode, size: usize, rng: &mut ChaCha8Rng) -> Stripe {
    let mut s = code.new_stripe(size).unwrap();
    s.randomize_data(code.config(), rng);
    s
}

/// Seeded configurations with n <= 16, r <= 16, m <= 3, s <= 4, mixing
/// field widths.
fn config_sweep(count: usize) -> Vec<StairConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = vec![
        StairConfig::new(8, 4, 2, &[1, 1, 2], 8).unwrap(),
        StairConfig::new(16, 16, 3, &[1, 1, 1, 1], 8).unwrap(),
        StairConfig::new(16, 16, 2, &[4], 16).unwrap(),
        StairConfig::new(6, 3, 0, &[1, 2], 32).unwrap(),
    ];
    while out.len() < count {
        let n = rng.gen_range(3..=16);
        let r = rng.gen_range(1..=16);
        let m = rng.gen_range(0..=3.min(n - 1));
        let mut left = rng.gen_range(0..=4);
        let mut e = Vec::new();
        while left > 0 {
            let part = rng.gen_range(1..=left);
            e.push(part);
            left -= part;
        }
        e.sort_unstable();
        let w = [8, 8, 8, 16, 32][rng.gen_range(0..5)];
        if let Ok(cfg) = StairConfig::new(n, r, m, &e, w) {
            if !out.contains(&cfg) {
                out.push(cfg);
            }
        }
    }
    out
}

fn c1_encoder_equivalence() -> Outcome {
    let configs = config_sweep(24);
    let mut stripes = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for cfg in &configs {
        let code = StairCode::new(cfg.clone()).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let base = random_stripe(&code, 16, &mut rng);
            let outs: Vec<Stripe> = Method::ALL
                .iter()
                .map(|&m| {
                    let mut s = base.clone();
                    code.encode(&mut s, m).unwrap();
                    s
                })
                .collect();
            ensure(outs[0] == outs[1] && outs[1] == outs[2], || format!("encoders disagree on {cfg}"))?;
            stripes += 1;
        }
    }
    Ok(format!("{} configs, {stripes} stripes byte-identical", configs.len()))
}

/// Sorted-descending counts fit under sorted-descending tolerances.
fn fits(counts: &[usize], e: &[usize]) -> bool {
    let mut c: Vec<usize> = counts.iter().copied().filter(|&x| x > 0).collect();
    c.sort_unstable_by(|a, b| b.cmp(a));
    let mut t = e.to_vec();
    t.sort_unstable_by(|a, b| b.cmp(a));
    c.len() <= t.len() && c.iter().zip(&t).all(|(a, b)| a <= b)
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|b| b.count_ones() as usize <= k).map(|b| (0..n).filter(|i| b >> i & 1 == 1).collect()).collect()
}

/// Every pattern of at most `m` whole-chunk failures plus sector failures
/// on the other chunks whose counts fit under `e`.
fn exhaustive(cfg: &StairConfig, symbol: usize) -> Result<usize, String> {
    let code = StairCode::new(cfg.clone()).unwrap();
    let mut clean = random_stripe(&code, symbol, &mut ChaCha8Rng::seed_from_u64(5));
    code.encode(&mut clean, Method::Upstairs).unwrap();
    let (n, r) = (cfg.n(), cfg.r());
    let total = AtomicUsize::new(0);

    fn walk(
        cfg: &StairConfig,
        col: usize,
        failed: &[usize],
        masks: &mut Vec<(usize, u32)>,
        visit: Visit,
    ) -> Result<(), String> {
        if col == cfg.n() {
            return visit(masks);
        }
        if failed.contains(&col) {
            return walk(cfg, col + 1, failed, masks, visit);
        }
        for mask in 0u32..1 << cfg.r() {
            if mask != 0 {
                masks.push((col, mask));
            }
            let counts: Vec<usize> = masks.iter().map(|&(_, m)| m.count_ones() as usize).collect();
            if fits(&counts, cfg.e()) {
                walk(cfg, col + 1, failed, masks, visit)?;
            }
            if mask != 0 {
                masks.pop();
            }
        }
        Ok(())
    }

    subsets_up_to(n, cfg.m()).par_iter().try_for_each(|failed| {
        let mut count = 0;
        let mut visit = |masks: &[(usize, u32)]| -> Result<(), String> {
            let mut p = FailurePattern::new();
            for &c in failed {
                p.fail_chunk(c);
            }
            for &(c, mask) in masks {
                for row in (0..r).filter(|row| mask >> row & 1 == 1) {
                    p.fail_sector(row, c);
                }
            }
            ensure(pattern_within_coverage(cfg, &p), || format!("{p:?} should be within coverage"))?;
            let mut s = clean.clone();
            s.erase(&p.lost_cells(cfg));
            code.decode(&mut s, &p).map_err(|e| format!("{p:?}: {e}"))?;
            ensure(s == clean, || format!("{p:?} decoded to wrong bytes"))?;
            count += 1;
            Ok(())
        };
        walk(cfg, 0, failed, &mut Vec::new(), &mut visit)?;
        total.fetch_add(count, Ordering::Relaxed);
        Ok::<(), String>(())
    })?;
    Ok(total.into_inner())
}

fn c2_exhaustive_roundtrip() -> Outcome {
    let a = exhaustive(&StairConfig::new(6, 3, 1, &[1, 2], 8).unwrap(), 2)?;
    let b = exhaustive(&StairConfig::new(8, 4, 2, &[1, 1, 2], 8).unwrap(), 2)?;
    Ok(format!("n=6: {a} patterns, n=8: {b} patterns, 0 failures"))
}

fn c3_homomorphic() -> Outcome {
    let mut rows = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for cfg in config_sweep(24) {
        let code = StairCode::new(cfg.clone()).unwrap();
        let mut s = random_stripe(&code, 16, &mut rng);
        code.encode(&mut s, code.choose_method()).unwrap();
        let canon = code.canonical(&s).unwrap();
        for i in 0..canon.rows() {
            ensure(code.row_code().check_codeword(&canon.row(i)), || format!("{cfg}: row {i} fails the check"))?;
            rows += (i >= cfg.r()) as usize;
        }
        if let Some(col) = code.col_code() {
            for j in 0..canon.cols() {
                ensure(col.check_codeword(&canon.column(j)), || format!("{cfg}: column {j} fails the check"))?;
            }
        }
        ensure(canon.outside_parities_zero(), || format!("{cfg}: outside parities are not zero"))?;
    }
    Ok(format!("{rows} augmented rows pass the row-code check"))
}

fn c4_trace() -> Outcome {
    let cells = |l: &[(usize, usize)]| l.iter().map(|&(r, c)| Cell::new(r, c)).collect::<Vec<_>>();
    let row = |i: usize, cols: &[usize]| cols.iter().map(|&c| Cell::new(i, c)).collect::<Vec<_>>();
    let code = code(8, 4, 2, &[1, 1, 2]);
    let mut lost: Vec<Cell> = (0..4).flat_map(|r| [Cell::new(r, 6), Cell::new(r, 7)]).collect();
    lost.extend(cells(&[(3, 3), (3, 4), (2, 5), (3, 5)]));
    let plan = code.plan_decode(&lost, Strategy::Upstairs).map_err(|e| e.to_string())?;

    let col = |j| (cells(&[(0, j), (1, j), (2, j), (3, j)]), cells(&[(4, j), (5, j)]));
    let mut want = vec![col(0), col(1), col(2)];
    want.push((row(4, &[0, 1, 2, 8, 9, 10]), row(4, &[3, 4, 5])));
    want.push((cells(&[(0, 3), (1, 3), (2, 3), (4, 3)]), cells(&[(3, 3), (5, 3)])));
    want.push((cells(&[(0, 4), (1, 4), (2, 4), (4, 4)]), cells(&[(3, 4), (5, 4)])));
    want.push((row(5, &[0, 1, 2, 3, 4, 10]), row(5, &[5])));
    want.push((cells(&[(0, 5), (1, 5), (4, 5), (5, 5)]), cells(&[(2, 5), (3, 5)])));
    for i in 0..4 {
        want.push((row(i, &[0, 1, 2, 3, 4, 5]), row(i, &[6, 7])));
    }
    let got: Vec<_> = plan.steps().iter().map(|s| (s.inputs.clone(), s.outputs.clone())).collect();
    for (k, (g, w)) in got.iter().zip(&want).enumerate() {
        ensure(g == w, || format!("step {} differs: {g:?} vs {w:?}", k + 1))?;
    }
    ensure(got.len() == want.len(), || format!("{} steps, want {}", got.len(), want.len()))?;
    Ok(format!("{} steps match", want.len()))
}

fn c5_cost_model() -> Outcome {
    for (e, up, down) in [(vec![4], 600, 352), (vec![1, 1, 1, 1], 312, 640)] {
        let c = code(8, 16, 2, &e);
        let (gu, gd) = (c.xor_count(Method::Upstairs), c.xor_count(Method::Downstairs));
        ensure((gu, gd) == (up, down), || format!("e={e:?}: got {gu}/{gd}, want {up}/{down}"))?;
        ensure(c.upstairs_schedule().mult_xors() == up && c.downstairs_schedule().mult_xors() == down, || {
            format!("e={e:?}: schedules do not match the counts")
        })?;
    }
    let mut checked = 0;
    for cfg in config_sweep(24) {
        let c = StairCode::new(cfg.clone()).unwrap();
        let costs: Vec<usize> = Method::ALL.iter().map(|&m| c.xor_count(m)).collect();
        let chosen = c.choose_method();
        ensure(c.xor_count(chosen) == *costs.iter().min().unwrap(), || format!("{cfg}: {chosen} is not the argmin"))?;
        let deps: usize = cfg.data_cells().iter().map(|&d| c.parity_dependents(d).unwrap().len()).sum();
        ensure(deps == costs[0], || format!("{cfg}: standard {} vs dependents {deps}", costs[0]))?;
        checked += 1;
    }
    Ok(format!("600/352 and 312/640 exact, argmin and dependent sums on {checked} configs"))
}

/// Changes one data cell and counts the parity cells that change.
fn perturbation_penalty(code: &StairCode) -> f64 {
    let cfg = code.config();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut base = random_stripe(code, 8, &mut rng);
    code.encode(&mut base, Method::Standard).unwrap();
    let parity = cfg.parity_cells();
    let data = cfg.data_cells();
    let mut total = 0;
    for d in &data {
        let mut s = base.clone();
        for b in s.cell_mut(d.row, d.col) {
            *b ^= 0x5A;
        }
        code.encode(&mut s, Method::Upstairs).unwrap();
        total += parity.iter().filter(|p| s.cell(p.row, p.col) != base.cell(p.row, p.col)).count();
    }
    total as f64 / data.len() as f64
}

fn c6_update_penalty() -> Outcome {
    let mut report = Vec::new();
    for (n, r, m, e) in [(8, 4, 2, vec![1, 1, 2]), (6, 3, 1, vec![1, 2]), (8, 16, 2, vec![4]), (8, 16, 2, vec![1, 1, 1, 1])] {
        let c = code(n, r, m, &e);
        let (got, oracle) = (c.update_penalty(), perturbation_penalty(&c));
        ensure(got == oracle, || format!("e={e:?}: {got} vs oracle {oracle}"))?;
        report.push(format!("{got:.3}"));
    }
    for m in 1..=3 {
        let c = code(8, 8, m, &[]);
        ensure(c.update_penalty() == m as f64, || format!("s=0, m={m}: {}", c.update_penalty()))?;
    }
    Ok(format!("oracle agrees ({}), s=0 gives m", report.join(", ")))
}

fn c7_array_counts() -> Outcome {
    let params = ReliabilityParams::sata(1e-14, SectorModel::Independent);
    let want = [4994, 5039, 5085, 5131, 5179, 5227, 5276, 5327, 5378, 5430, 5483, 5538, 5593];
    let got: Vec<u64> =
        (0..13).map(|s| num_arrays(&params, &CodeSpec::new(8, 16, 1, Coverage::Sd(s))).unwrap()).collect();
    ensure(got == want, || format!("got {got:?}"))?;
    Ok(format!("{}..{} exact", got[0], got[12]))
}

fn random_dist(r: usize, rng: &mut ChaCha8Rng) -> ChunkFailureDist {
    let p0 = rng.gen_range(0.6..0.98);
    let mut tail: Vec<f64> = (0..r).map(|i| rng.gen::<f64>() / (i + 1) as f64).collect();
    let t: f64 = tail.iter().sum();
    tail.iter_mut().for_each(|x| *x *= (1.0 - p0) / t);
    let mut p = vec![p0];
    p.extend(tail);
    ChunkFailureDist::new(p).unwrap()
}

/// Sums the probability of every count vector the predicate rejects.
fn enumerate_loss(k: usize, dist: &ChunkFailureDist, ok: &dyn Fn(&[usize]) -> bool) -> f64 {
    let r = dist.r();
    let mut loss = 0.0;
    let mut counts = vec![0; k];
    loop {
        if !ok(&counts) {
            loss += counts.iter().map(|&c| dist.p(c)).product::<f64>();
        }
        let mut i = 0;
        while i < k && counts[i] == r {
            counts[i] = 0;
            i += 1;
        }
        if i == k {
            return loss;
        }
        counts[i] += 1;
    }
}

fn c8_closed_forms() -> Outcome {
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for _ in 0..200 {
        let r = rng.gen_range(4..=16);
        let k = rng.gen_range(3..=15);
        let d = random_dist(r, &mut rng);
        let p = d.as_slice();
        let s = rng.gen_range(4..=r.min(8));
        let pairs = [
            (closed_form::rs(k, p), Coverage::Rs),
            (closed_form::stair_single(k, s, p), Coverage::stair(&[s])),
            (closed_form::stair_one_rest(k, s, p), Coverage::stair(&[1, s - 1])),
            (closed_form::stair_two_rest(k, s, p), Coverage::stair(&[2, s - 2])),
            (closed_form::stair_one_one_rest(k, s, p), Coverage::stair(&[1, 1, s - 2])),
            (closed_form::stair_ones(k, s, p), Coverage::stair(&vec![1; s])),
        ];
        for (closed, cov) in pairs {
            let dp = p_str(&cov, k, &d);
            worst = worst.max(rel(closed, dp));
            ensure(rel(closed, dp) <= 1e-10, || format!("{cov}, k={k}, s={s}: closed {closed} vs dp {dp}"))?;
            cases += 1;
        }
    }
    // SD and RS against enumeration over every count vector
    for _ in 0..30 {
        let r = rng.gen_range(3..=5);
        let k = rng.gen_range(2..=5);
        let d = random_dist(r, &mut rng);
        let rs = enumerate_loss(k, &d, &|c| c.iter().all(|&x| x == 0));
        ensure(rel(closed_form::rs(k, d.as_slice()), rs) <= 1e-10, || format!("rs k={k}"))?;
        for s in 1..=3 {
            let oracle = enumerate_loss(k, &d, &|c| c.iter().sum::<usize>() <= s);
            let closed = closed_form::sd(k, s, d.as_slice());
            let dp = p_str(&Coverage::Sd(s), k, &d);
            ensure(rel(closed, oracle) <= 1e-10 && rel(dp, oracle) <= 1e-10, || {
                format!("sd:{s} k={k}: closed {closed}, dp {dp}, enumeration {oracle}")
            })?;
            let e = [1, 2];
            let st = enumerate_loss(k, &d, &|c| fits(c, &e));
            ensure(rel(p_str(&Coverage::stair(&e), k, &d), st) <= 1e-10, || format!("stair:1,2 k={k}"))?;
            cases += 3;
        }
    }
    Ok(format!("{cases} comparisons, worst relative error {worst:.1e}"))
}

fn c9_monte_carlo() -> Outcome {
    let codes: Vec<Coverage> = ["rs", "sd:1", "sd:2", "sd:3", "stair:1", "stair:3", "stair:1,2", "stair:1,1,1"]
        .iter()
        .map(|c| c.parse().unwrap())
        .collect();
    let dist = ChunkFailureDist::independent(16, 1e-3).unwrap();
    let report = simulate(&codes, 7, &dist, 1_000_000, 20240601);
    let mut worst: f64 = 0.0;
    for (cov, est) in codes.iter().zip(&report.estimates) {
        let exact = p_str(cov, 7, &dist);
        worst = worst.max((exact - est.p).abs() / est.sigma);
        ensure(est.within_sigmas(exact, 3.0), || format!("{cov}: exact {exact:.4e}, simulated {:.4e} +/- {:.1e}", est.p, est.sigma))?;
    }
    Ok(format!("{} codes within 3 sigma, worst {worst:.2} sigma", codes.len()))
}

fn c10_orderings() -> Outcome {
    let sata = |p, model| ReliabilityParams::sata(p, model);
    let spec = |e: &[usize]| CodeSpec::new(8, 16, 1, if e.is_empty() { Coverage::Rs } else { Coverage::stair(e) });
    let indep = sata(1e-14, SectorModel::Independent);
    let rs = analyze(&indep, &spec(&[])).unwrap().mttdl_sys_hours;
    let one = analyze(&indep, &spec(&[1])).unwrap().mttdl_sys_hours;
    ensure(one / rs > 100.0, || format!("e=(1) only {:.1}x RS", one / rs))?;

    let corr = SectorModel::Correlated { b1: 0.98, alpha: 1.79 };
    for p_bit in [1e-14, 1e-13, 1e-12, 1e-11, 1e-10] {
        for s in 2..=4 {
            let families: Vec<Vec<usize>> = stair::cli::e_sweep(8, 16, 1, s);
            let mttdl = |e: &[usize]| analyze(&sata(p_bit, corr), &spec(e)).unwrap().mttdl_sys_hours;
            let top = mttdl(&[s]);
            for e in families.iter().filter(|e| e.len() > 1) {
                ensure(top > mttdl(e), || format!("P_bit={p_bit:e}: e=({s}) not above {e:?}"))?;
            }
        }
    }
    Ok(format!("e=(1)/RS = {:.0}x; e=(s) ranks first for s=2..4 under bursts", one / rs))
}

fn c11_throughput() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut configs = 0;
    for s in 0..=4 {
        for e in stair::cli::e_sweep(16, 16, 2, s) {
            let c = code(16, 16, 2, &e);
            let rows = bench::run(&c, bench::symbol_size_for(c.config(), 8 << 20), 5).map_err(|e| e.to_string())?;
            let speed = |m: Method| rows.iter().find(|r| r.op == format!("encode-{m}")).unwrap().mb_per_s;
            let ratio = speed(c.choose_method()) / speed(Method::Standard);
            worst = worst.min(ratio);
            ensure(ratio >= 0.9, || format!("e={e:?}: {} at {ratio:.2}x standard", c.choose_method()))?;
            configs += 1;
        }
    }
    Ok(format!("{configs} configs, chosen encoder at least {worst:.2}x standard"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("encoder equivalence", c1_encoder_equivalence),
        ("exhaustive round-trip", c2_exhaustive_roundtrip),
        ("homomorphic property", c3_homomorphic),
        ("decode trace", c4_trace),
        ("cost model", c5_cost_model),
        ("update penalty", c6_update_penalty),
        ("array counts", c7_array_counts),
        ("closed forms", c8_closed_forms),
        ("monte carlo", c9_monte_carlo),
        ("qualitative orderings", c10_orderings),
        ("throughput", c11_throughput),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
