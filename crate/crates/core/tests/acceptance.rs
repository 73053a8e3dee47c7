//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! nonzero status if any criterion fails.
//!
//! Run with `cargo test -p nearspace --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nearspace::closure::{check_lc1_cardinality, gen_closure, is_gamma_dependent, lc_index, lc_strata, Space};
use nearspace::ege::{apply_step, column_relations, ege};
use nearspace::linmaps::{
    apply, column_sum, compose, is_linear, is_normal, linearity_violation, MapRep, Mode,
};
use nearspace::nearfield::MAX_ORDER;
use nearspace::seed::{build_seed, seed_number, seed_report, u_max, u_max_closed, verify_seed};
use nearspace::subgroups::{count_subgroups, enumerate_canonical};
use nearspace::{Elem, Nearfield, NfMatrix, NfVector, DEFAULT_BUDGET};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RNG_SEED: u64 = 0x5eed_2024;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dn(q: u64, n: u64) -> Nearfield {
    Nearfield::build(q, n, MAX_ORDER).expect("valid Dickson pair")
}

/// GF(9) = GF(3)[x]/(x²+1) with elements encoded as `c0 + 3·c1`, written
/// independently of the library.
mod gf9 {
    pub fn mul(a: u32, b: u32) -> u32 {
        let (a0, a1, b0, b1) = (a % 3, a / 3, b % 3, b / 3);
        // x² = −1
        let c0 = (a0 * b0 + 2 * a1 * b1) % 3;
        let c1 = (a0 * b1 + a1 * b0) % 3;
        c0 + 3 * c1
    }

    pub fn is_square(a: u32) -> bool {
        (0..9).any(|r| mul(r, r) == a)
    }
}

const PRINTED_TABLE: [[&str; 9]; 9] = [
    ["0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "1", "2", "x", "1+x", "2+x", "2x", "1+2x", "2+2x"],
    ["0", "2", "1", "2x", "2+2x", "1+2x", "x", "2+x", "1+x"],
    ["0", "x", "2x", "2", "1+2x", "1+x", "1", "2+2x", "2+x"],
    ["0", "1+x", "2+2x", "2+x", "2", "2x", "1+2x", "x", "1"],
    ["0", "2+x", "1+2x", "2+2x", "x", "2", "1+x", "1", "2x"],
    ["0", "2x", "x", "1", "2+x", "2+2x", "2", "1+x", "1+2x"],
    ["0", "1+2x", "2+x", "1+x", "2x", "1", "2+2x", "2", "x"],
    ["0", "2+2x", "1+x", "1+2x", "1", "x", "2+x", "2x", "2"],
];

const LABELS: [&str; 9] = ["0", "1", "2", "x", "1+x", "2+x", "2x", "1+2x", "2+2x"];

fn table_fidelity() -> Outcome {
    let nf = dn(3, 2);
    let table = nf.mul_table().map_err(|e| e.to_string())?;
    let label = |s: &str| nf.parse_elem(s).unwrap();
    let mut checked = 0;
    for (i, row) in PRINTED_TABLE.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let (a, b) = (label(LABELS[i]), label(LABELS[j]));
            ensure(table[b.code() as usize][a.code() as usize] == label(cell), || {
                format!("printed[{}][{}] = {cell} but {}∘{} differs", LABELS[i], LABELS[j], LABELS[j], LABELS[i])
            })?;
            let expected = if a.is_zero() || gf9::is_square(a.code()) {
                gf9::mul(a.code(), b.code())
            } else {
                gf9::mul(a.code(), gf9::mul(b.code(), gf9::mul(b.code(), b.code())))
            };
            ensure(table[a.code() as usize][b.code() as usize].code() == expected, || {
                format!("{}∘{} breaks the square rule", LABELS[i], LABELS[j])
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} entries match transposed and satisfy the square rule"))
}

fn nearfield_laws() -> Outcome {
    let mut details = Vec::new();
    for (q, n) in [(3, 2), (5, 2)] {
        let nf = dn(q, n);
        let all: Vec<Elem> = nf.elements().collect();
        let nonzero: Vec<Elem> = nf.nonzero().collect();
        let mut violations = 0usize;
        for &a in &nonzero {
            let inv = nf.inv(a).map_err(|e| e.to_string())?;
            violations += (nf.mul(a, inv) != Elem::ONE || nf.mul(inv, a) != Elem::ONE) as usize;
            violations += (nf.mul(a, Elem::ONE) != a || nf.mul(Elem::ONE, a) != a) as usize;
            for &b in &nonzero {
                violations += nf.mul(a, b).is_zero() as usize;
                for &c in &nonzero {
                    violations += (nf.mul(nf.mul(a, b), c) != nf.mul(a, nf.mul(b, c))) as usize;
                }
            }
        }
        for &a in &all {
            violations += (nf.add(a, Elem::ZERO) != a || nf.add(a, nf.neg(a)) != Elem::ZERO) as usize;
            for &b in &all {
                violations += (nf.add(a, b) != nf.add(b, a)) as usize;
                for &c in &all {
                    violations += (nf.add(nf.add(a, b), c) != nf.add(a, nf.add(b, c))) as usize;
                    violations += (nf.mul(a, nf.add(b, c)) != nf.add(nf.mul(a, b), nf.mul(a, c))) as usize;
                }
            }
        }
        ensure(violations == 0, || format!("DN({q},{n}): {violations} law violations"))?;
        let w = nf.find_witness().ok_or_else(|| format!("DN({q},{n}): no witness"))?;
        let lhs = nf.mul(nf.add(w.alpha, w.beta), w.lambda);
        let rhs = nf.add(nf.mul(w.alpha, w.lambda), nf.mul(w.beta, w.lambda));
        ensure(lhs != rhs, || format!("DN({q},{n}): witness does not break right distributivity"))?;
        details.push(format!("DN({q},{n}) order {}", nf.order()));
    }
    Ok(format!("{} clean, witnesses confirmed", details.join(", ")))
}

fn all_maps(nf: &Nearfield, n: usize) -> Vec<MapRep> {
    let order = nf.order();
    let total = (order as usize).pow((n * n) as u32);
    (0..total)
        .map(|mut idx| {
            let rows = (0..n)
                .map(|_| {
                    NfVector(
                        (0..n)
                            .map(|_| {
                                let e = nf.elem((idx % order as usize) as u32).unwrap();
                                idx /= order as usize;
                                e
                            })
                            .collect(),
                    )
                })
                .collect();
            MapRep::from_matrix(NfMatrix::new(n, rows).unwrap()).unwrap()
        })
        .collect()
}

fn map_counts() -> Outcome {
    let nf = dn(3, 2);
    let maps = all_maps(&nf, 2);
    let (mut linear, mut normal) = (0, 0);
    for t in &maps {
        let sem = is_linear(&nf, t, Mode::Semantic, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let crit = is_linear(&nf, t, Mode::Criterion, DEFAULT_BUDGET).unwrap();
        ensure(sem == crit, || format!("linearity disagrees on {:?}", t.matrix()))?;
        if sem {
            linear += 1;
            let sem_n = is_normal(&nf, t, Mode::Semantic, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            let crit_n = is_normal(&nf, t, Mode::Criterion, DEFAULT_BUDGET).unwrap();
            ensure(sem_n == crit_n, || format!("normality disagrees on {:?}", t.matrix()))?;
            normal += sem_n as usize;
        }
    }
    ensure(maps.len() == 6561 && linear == 289 && normal == 161, || {
        format!("counts {} / {linear} / {normal}", maps.len())
    })?;
    Ok(format!("{} maps, {linear} linear, {normal} normal, criteria agree map-by-map", maps.len()))
}

fn counterexample() -> Outcome {
    let nf = dn(3, 2);
    let cols = [NfVector::from_codes(&[1, 2]), NfVector::from_codes(&[1, 1])];
    let t = MapRep::from_columns(&cols).unwrap();
    ensure(!is_linear(&nf, &t, Mode::Semantic, DEFAULT_BUDGET).unwrap(), || "classified linear".into())?;
    let (v, r) = linearity_violation(&nf, &t, DEFAULT_BUDGET)
        .unwrap()
        .ok_or("no violating pair found")?;
    let lhs = apply(&nf, &t, &nf.vec_scale(&v, r)).unwrap();
    let rhs = nf.vec_scale(&apply(&nf, &t, &v).unwrap(), r);
    ensure(lhs != rhs, || "violating pair does not re-check".into())?;
    let x = nf.parse_elem("x").unwrap();
    let vx = NfVector(vec![Elem::ONE, x]);
    let lhs_x = apply(&nf, &t, &nf.vec_scale(&vx, x)).unwrap();
    let rhs_x = nf.vec_scale(&apply(&nf, &t, &vx).unwrap(), x);
    ensure(lhs_x != rhs_x, || "((1,x), x) is not violating".into())?;
    Ok(format!(
        "T(v∘r) = {} ≠ T(v)∘r = {} at v = {}, r = {}",
        nf.format_vector(&lhs, Default::default()),
        nf.format_vector(&rhs, Default::default()),
        nf.format_vector(&v, Default::default()),
        nf.format_elem(r, Default::default())
    ))
}

fn random_corpus(nf: &Nearfield, count: usize) -> Vec<NfMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
    (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=3);
            let rows = (0..k)
                .map(|_| NfVector((0..m).map(|_| nf.elem(rng.gen_range(0..nf.order())).unwrap()).collect()))
                .collect();
            NfMatrix::new(m, rows).unwrap()
        })
        .collect()
}

fn ege_vs_oracle() -> Outcome {
    let nf = dn(3, 2);
    let corpus = random_corpus(&nf, 300);
    let mut tricks = 0;
    for input in &corpus {
        let space = Space::new(&nf, input.ncols(), DEFAULT_BUDGET).unwrap();
        let out = ege(&nf, input);
        tricks += out.tricks.len();
        ensure(out.basis.has_disjoint_supports(), || format!("shared column in {:?}", out.basis))?;
        let before = gen_closure(&space, input.rows()).unwrap();
        let after = gen_closure(&space, out.basis.rows()).unwrap();
        ensure(before == after, || format!("gen differs for {input:?}"))?;
        ensure(after.len() == 9usize.pow(out.dimension as u32), || {
            format!("|gen| = {} but dimension {}", after.len(), out.dimension)
        })?;
    }
    Ok(format!("{} matrices agree with the closure oracle ({tricks} tricks applied)", corpus.len()))
}

fn linearity_index() -> Outcome {
    let nf = dn(3, 2);
    let space = Space::new(&nf, 3, DEFAULT_BUDGET).unwrap();
    let v = [NfVector::from_codes(&[1, 0, 1]), NfVector::from_codes(&[1, 1, 0])];
    let strata = lc_strata(&space, &v).unwrap();
    let index = lc_index(&space, &v).unwrap();
    ensure(index == 2, || format!("index {index}"))?;
    ensure(strata[1].len() < 729 && strata[2].len() == 729, || {
        format!("|LC_1| = {}, |LC_2| = {}", strata[1].len(), strata[2].len())
    })?;
    Ok(format!("I = 2, |LC_1| = {}, |LC_2| = 729", strata[1].len()))
}

fn seed_construction() -> Outcome {
    let nf = dn(3, 2);
    for m in 1..=24 {
        let seed = build_seed(&nf, m).map_err(|e| e.to_string())?;
        // the least k whose u_k reaches m, found by scanning
        let expected = (1..).find(|&k| u_max(k, 9) >= m as u128).unwrap() as usize;
        ensure(seed.matrix.nrows() == expected, || format!("m={m}: {} rows", seed.matrix.nrows()))?;
        ensure(verify_seed(&nf, &seed.matrix), || format!("m={m}: EGE dimension short"))?;
        if m <= 4 {
            let report = seed_report(&nf, &seed.matrix, DEFAULT_BUDGET).unwrap();
            ensure(report.closure_agrees == Some(true), || format!("m={m}: closure disagrees"))?;
        }
    }
    let bounds = [(9, 2), (10, 3), (24, 3)];
    for (m, k) in bounds {
        let got = seed_number(m, 9).unwrap();
        ensure(got == k, || format!("seed_number({m}) = {got}"))?;
    }
    Ok("m = 1..24 verified by EGE, m ≤ 4 by closure; boundaries 9→2, 10→3, 24→3".into())
}

fn u_law() -> Outcome {
    for order in [5, 9, 25] {
        for k in 1..=50 {
            ensure(u_max(k, order) == u_max_closed(k, order), || format!("|R|={order}, k={k}"))?;
        }
    }
    let seq: Vec<u128> = (1..=4).map(|k| u_max(k, 9)).collect();
    ensure(seq == [1, 9, 24, 46], || format!("{seq:?}"))?;
    Ok("recurrence = closed form, u = 1, 9, 24, 46".into())
}

fn subgroup_counts() -> Outcome {
    let nf = dn(3, 2);
    let mut pairs = 0;
    for m in 1..=4 {
        for k in 1..=m {
            let formula = count_subgroups(m, k, 9).unwrap();
            let listed = enumerate_canonical(&nf, m, k, DEFAULT_BUDGET).unwrap();
            ensure(formula == BigUint::from(listed.len()), || {
                format!("(m,k)=({m},{k}): formula {formula}, listed {}", listed.len())
            })?;
            pairs += 1;
        }
    }
    let spot = [(2, 1, 9u32), (3, 2, 9), (1, 1, 1), (2, 2, 1), (3, 3, 1), (4, 4, 1)];
    for (m, k, want) in spot {
        ensure(count_subgroups(m, k, 9).unwrap() == BigUint::from(want), || format!("({m},{k})"))?;
    }
    Ok(format!("{pairs} (m,k) pairs agree with the canonical listing"))
}

fn lc1_cardinality() -> Outcome {
    let nf = dn(3, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED ^ 0x1c1);
    let (mut independent, mut arbitrary, mut draws) = (0, 0, 0);
    while independent < 100 {
        draws += 1;
        ensure(draws < 100_000, || "could not sample enough independent sets".into())?;
        let m = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=m);
        let v: Vec<NfVector> = (0..k)
            .map(|_| NfVector((0..m).map(|_| nf.elem(rng.gen_range(0..9)).unwrap()).collect()))
            .collect();
        let space = Space::new(&nf, m, DEFAULT_BUDGET).unwrap();
        let report = check_lc1_cardinality(&space, &v).unwrap();
        ensure(report.size as u128 <= report.bound, || format!("|LC_1| too big for {v:?}"))?;
        arbitrary += 1;
        if is_gamma_dependent(&space, &v, 2).unwrap().is_none() {
            ensure(report.size as u128 == 9u128.pow(k as u32), || {
                format!("|LC_1| = {} for independent {v:?}", report.size)
            })?;
            independent += 1;
        }
    }
    Ok(format!("{independent} independent sets reach 9^k, {arbitrary} sets within the bound"))
}

fn column_dependence_invariance() -> Outcome {
    let nf = dn(3, 2);
    let corpus = random_corpus(&nf, 300);
    let mut steps = 0;
    for input in &corpus {
        let out = ege(&nf, input);
        let mut work = input.clone();
        let start = column_relations(&nf, &work);
        for step in &out.trace {
            apply_step(&nf, &mut work, step).map_err(|e| e.to_string())?;
            steps += 1;
            ensure(column_relations(&nf, &work) == start, || {
                format!("relation changed at {step:?} on {input:?}")
            })?;
        }
    }
    Ok(format!("{steps} steps over {} traces preserve every column relation", corpus.len()))
}

fn composition_closure() -> Outcome {
    let nf = dn(3, 2);
    let maps = all_maps(&nf, 2);
    let linear: Vec<&MapRep> =
        maps.iter().filter(|t| is_linear(&nf, t, Mode::Criterion, DEFAULT_BUDGET).unwrap()).collect();
    let normal: Vec<&MapRep> = linear
        .iter()
        .copied()
        .filter(|t| is_normal(&nf, t, Mode::Criterion, DEFAULT_BUDGET).unwrap())
        .collect();
    for a in &linear {
        for b in &linear {
            let c = compose(&nf, a, b).unwrap();
            ensure(is_linear(&nf, &c, Mode::Semantic, DEFAULT_BUDGET).unwrap(), || {
                format!("{:?} then {:?} is not linear", a.matrix(), b.matrix())
            })?;
        }
    }
    for a in &normal {
        for b in &normal {
            let c = compose(&nf, a, b).unwrap();
            ensure(is_normal(&nf, &c, Mode::Semantic, DEFAULT_BUDGET).unwrap(), || {
                format!("{:?} then {:?} is not normal", a.matrix(), b.matrix())
            })?;
        }
    }
    let e1 = MapRep::from_matrix(NfMatrix::from_codes(&[&[0, 0], &[0, 1]]).unwrap()).unwrap();
    let e2 = MapRep::from_matrix(NfMatrix::from_codes(&[&[0, 0], &[1, 0]]).unwrap()).unwrap();
    let sum = column_sum(&nf, &e1, &e2).unwrap();
    ensure(sum.matrix().row(1) == &NfVector::from_codes(&[1, 1]), || "sum lacks row (1,1)".into())?;
    ensure(!is_linear(&nf, &sum, Mode::Semantic, DEFAULT_BUDGET).unwrap(), || "sum is linear".into())?;
    Ok(format!(
        "{}² linear and {}² normal compositions closed; normal sum with row (1,1) is not linear",
        linear.len(),
        normal.len()
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "DN(3,2) table fidelity", limit: secs(1), run: table_fidelity },
        Criterion { id: 2, name: "nearfield laws", limit: secs(10), run: nearfield_laws },
        Criterion { id: 3, name: "map counts", limit: secs(60), run: map_counts },
        Criterion { id: 4, name: "non-linear counterexample", limit: secs(1), run: counterexample },
        Criterion { id: 5, name: "EGE vs closure oracle", limit: secs(300), run: ege_vs_oracle },
        Criterion { id: 6, name: "linearity index", limit: secs(10), run: linearity_index },
        Criterion { id: 7, name: "seed construction", limit: secs(300), run: seed_construction },
        Criterion { id: 8, name: "u_k law", limit: secs(1), run: u_law },
        Criterion { id: 9, name: "subgroup counts", limit: secs(60), run: subgroup_counts },
        Criterion { id: 10, name: "|LC_1| cardinality", limit: secs(120), run: lc1_cardinality },
        Criterion { id: 11, name: "EGE column-dependence invariance", limit: secs(300), run: column_dependence_invariance },
        Criterion { id: 12, name: "composition closure", limit: secs(120), run: composition_closure },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= c.limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, limit {:?}", c.limit))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {}: {detail} [{elapsed:.2?}]", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {}: {why} [{elapsed:.2?}]", c.id, c.name);
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
