use std::collections::BTreeSet;

use kmspin_core::cartan::{max_coclique, parse_gcm, realization, Gcm, Realization};
use kmspin_core::clifford::{random_ansatz_pair, random_symmetric, verify_bilinear_commutator_lemma};
use kmspin_core::exactnum::{inverse, CMatrix, QMatrix};
use kmspin_core::extender::{
    build_extended_rep, check_xmap, convert_convention, root_pairs, Convention, ExtendError,
};
use kmspin_core::halfspin::{build_half_spin, gammas};
use kmspin_core::higherspin::{
    five_half_map, random_vector, three_half_map, verify_identities, Identity, SymmetrizerContext,
};
use kmspin_core::rootsys::{compare_closure, pair, real_roots, Root};
use kmspin_core::weylrep::{sign_multiplicity, weyl_identity_residual, Space};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{ConventionArg, DiagramArgs, SpaceArg, SpinArg};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

pub enum Export {
    Rational(String, QMatrix),
    Gaussian(String, CMatrix),
    /// `A ⊗ B`, formed only when written out.
    Kron(String, QMatrix, QMatrix),
}

/// Everything a command produces: console lines, a JSON report, optional
/// matrices and an optional table for CSV output.
pub struct Outcome {
    pub lines: Vec<String>,
    pub report: Value,
    pub passed: bool,
    pub exports: Vec<Export>,
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Outcome {
    fn new(lines: Vec<String>, report: Value, passed: bool) -> Self {
        Self { lines, report, passed, exports: Vec::new(), table: None }
    }
}

fn load(d: &DiagramArgs) -> Result<(Gcm, Realization), CliError> {
    let g = parse_gcm(&d.diagram).map_err(|e| CliError::Usage(format!("bad diagram `{}`: {e}", d.diagram)))?;
    let r = realization(&g).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok((g, r))
}

fn coords(r: &Root) -> Value {
    json!(r.coords())
}

pub fn roots(d: &DiagramArgs) -> Result<Outcome, CliError> {
    let (_, r) = load(d)?;
    let roots: Vec<Root> = real_roots(&r, d.max_height as usize).into_iter().collect();
    let mut lines = vec![format!("{} positive real roots of height <= {}", roots.len(), d.max_height)];
    lines.extend(roots.iter().map(|x| format!("height {}: {x}", x.height())));
    let report = json!({
        "type": d.diagram,
        "max_height": d.max_height,
        "count": roots.len(),
        "roots": roots.iter().map(coords).collect::<Vec<_>>(),
    });
    let mut header = vec!["height".to_string()];
    header.extend((1..=r.k()).map(|i| format!("c{i}")));
    let rows = roots
        .iter()
        .map(|x| {
            let mut row = vec![x.height().to_string()];
            row.extend(x.coords().iter().map(i64::to_string));
            row
        })
        .collect();
    let mut out = Outcome::new(lines, report, true);
    out.table = Some((header, rows));
    Ok(out)
}

pub fn coclique(d: &DiagramArgs) -> Result<Outcome, CliError> {
    let (g, _) = load(d)?;
    let c = max_coclique(&g.diagram());
    let one_based: Vec<usize> = c.iter().map(|v| v + 1).collect();
    let exponent = g.n() - c.len();
    let lines = vec![
        format!(
            "maximum coclique (size {}): {}",
            c.len(),
            one_based.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
        ),
        format!("half-spin dimension: 2^{exponent} = {}", 1u64 << exponent),
    ];
    let report = json!({
        "type": d.diagram,
        "n": g.n(),
        "coclique": one_based,
        "dimension": 1u64 << exponent,
    });
    Ok(Outcome::new(lines, report, true))
}

pub fn halfspin(d: &DiagramArgs) -> Result<Outcome, CliError> {
    let (g, _) = load(d)?;
    let h = match build_half_spin(&g) {
        Ok(h) => h,
        Err(e) => {
            let report = json!({"type": d.diagram, "status": "fail", "error": e.to_string()});
            return Ok(Outcome::new(vec![format!("half-spin construction failed: {e}")], report, false));
        }
    };
    let gs = gammas(&h).map_err(|e| CliError::Io(e.to_string()))?;
    let order: Vec<usize> = h.ordering().iter().map(|v| v + 1).collect();
    let lines = vec![
        format!("complex dimension {}, Gamma size {}", h.dim(), gs.dim()),
        format!("node order: {}", order.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")),
        "rho(X_i)^2 = -1/4, commutation pattern and Berman relations: exact".to_string(),
    ];
    let report = json!({
        "type": d.diagram,
        "status": "pass",
        "dimension": h.dim(),
        "gamma_dimension": gs.dim(),
        "node_order": order,
    });
    let mut out = Outcome::new(lines, report, true);
    for (i, m) in h.rho().iter().enumerate() {
        out.exports.push(Export::Gaussian(format!("rho_{}", i + 1), m.clone()));
    }
    for (i, m) in gs.gamma().iter().enumerate() {
        out.exports.push(Export::Rational(format!("gamma_{}", i + 1), m.clone()));
    }
    Ok(out)
}

pub fn rep(d: &DiagramArgs, spin: SpinArg, convention: ConventionArg) -> Result<Outcome, CliError> {
    let (g, r) = load(d)?;
    let ctx = SymmetrizerContext::new(&r);
    let conv = match convention {
        ConventionArg::Plain => Convention::Plain,
        ConventionArg::Coord => Convention::Coord,
    };
    let low: Vec<Root> = real_roots(&r, d.max_height as usize).into_iter().collect();
    let pairs = root_pairs(&r, &low);
    let mut domain: BTreeSet<Root> = low.iter().cloned().collect();
    for (a, b) in &pairs {
        match pair(&r, a, b) {
            -1 => domain.insert(a.plus(b)),
            1 => domain.insert(a.minus(b).positive_form()),
            _ => false,
        };
    }
    let spin_name = match spin {
        SpinArg::ThreeHalf => "3/2",
        SpinArg::FiveHalf => "5/2",
    };
    let x = match spin {
        SpinArg::ThreeHalf => three_half_map(&ctx, &domain, conv),
        SpinArg::FiveHalf => five_half_map(&ctx, &domain, conv),
    }
    .map_err(|e| CliError::Io(e.to_string()))?;
    let check = check_xmap(&x, &r, &pairs).map_err(|e| CliError::Io(e.to_string()))?;
    let mut lines = vec![format!(
        "spin {spin_name}, {} convention: X(alpha) is {}x{}",
        match conv {
            Convention::Plain => "plain",
            Convention::Coord => "coordinate",
        },
        x.dim(),
        x.dim()
    )];
    lines.push(if check.passed() {
        format!("{} root pairs up to height {}: all relations hold", check.pairs_checked, d.max_height)
    } else {
        format!("{} root pairs: {} violations", check.pairs_checked, check.violations.len())
    });
    let plain = match conv {
        Convention::Plain => x,
        Convention::Coord => convert_convention(&x).map_err(|e| CliError::Io(e.to_string()))?,
    };
    let gs = gammas(&build_half_spin(&g).map_err(|e| CliError::Io(e.to_string()))?)
        .map_err(|e| CliError::Io(e.to_string()))?;
    let sigma = build_extended_rep(&plain, &r, &gs, &g);
    let mut report = json!({
        "type": d.diagram,
        "spin": spin_name,
        "pairs_checked": check.pairs_checked,
        "violations": check.violations,
    });
    let mut passed = check.passed();
    let mut exports = Vec::new();
    match sigma {
        Ok(rep) => {
            lines.push(format!("sigma: {} matrices of size {}, Berman relations: exact", rep.n(), rep.dim()));
            report["sigma_dimension"] = json!(rep.dim());
            for i in 0..rep.n() {
                let (x, gamma) = rep.factors(i);
                exports.push(Export::Kron(format!("sigma_{}", i + 1), x.clone(), gamma.clone()));
            }
        }
        Err(ExtendError::Berman(v)) => {
            passed = false;
            lines.push(format!("sigma: Berman relations fail ({} violations)", v.len()));
            report["berman_violations"] = json!(v);
        }
        Err(e) => return Err(CliError::Io(e.to_string())),
    }
    report["status"] = json!(if passed { "pass" } else { "fail" });
    let mut out = Outcome::new(lines, report, passed);
    out.exports = exports;
    Ok(out)
}

pub fn sym3(d: &DiagramArgs, space: SpaceArg, expect_sign: bool) -> Result<Outcome, CliError> {
    let (g, r) = load(d)?;
    let space = match space {
        SpaceArg::H => Space::H,
        SpaceArg::Sym2 => Space::Sym2,
        SpaceArg::Sym3 => Space::Sym3,
    };
    let mut lines = Vec::new();
    let mut rows = Vec::new();
    let mut sign_found = false;
    for (i, j) in g.diagram().edges() {
        let (a, b) = (Root::simple(r.k(), i), Root::simple(r.k(), j));
        let residual = weyl_identity_residual(&r, space, &a, &b).map_err(|e| CliError::Io(e.to_string()))?;
        let mult = sign_multiplicity(&r, space, &a, &b).map_err(|e| CliError::Io(e.to_string()))?;
        sign_found |= mult > 0;
        let zero = residual.is_zero();
        lines.push(format!(
            "alpha_{} alpha_{}: residual {}, sign multiplicity {mult}",
            i + 1,
            j + 1,
            if zero { "zero" } else { "nonzero" }
        ));
        rows.push(json!({
            "pair": [i + 1, j + 1],
            "residual_zero": zero,
            "residual_nonzero_entries": residual.nonzero_count(),
            "sign_multiplicity": mult,
        }));
    }
    let passed = if expect_sign { sign_found } else { !sign_found };
    lines.push(match (sign_found, expect_sign) {
        (true, true) => format!("{}: sign component present, as expected", space.name()),
        (true, false) => format!("{}: sign component present, X = rho(s) - 1/2 fails", space.name()),
        (false, true) => format!("{}: no sign component, but one was expected", space.name()),
        (false, false) => format!("{}: no sign component, X = rho(s) - 1/2 satisfies the relations", space.name()),
    });
    let report = json!({
        "type": d.diagram,
        "space": space.name(),
        "sign_found": sign_found,
        "expect_sign": expect_sign,
        "status": if passed { "pass" } else { "fail" },
        "pairs": rows,
    });
    Ok(Outcome::new(lines, report, passed))
}

pub fn closure(d: &DiagramArgs) -> Result<Outcome, CliError> {
    let (g, r) = load(d)?;
    let h = d.max_height as usize;
    let cmp = compare_closure(&r, h);
    let asserted = g.is_finite_or_affine();
    let mut lines = Vec::new();
    let passed = if asserted {
        let ok = cmp.is_equal();
        lines.push(format!("closure = real roots up to height {h}: {}", if ok { "YES" } else { "NO" }));
        if !ok {
            let lowest = cmp.missing.first().map(|x| x.to_string()).unwrap_or_default();
            lines.push(format!(
                "closure has {} of {} real roots; {} missing, lowest {lowest}",
                cmp.closure,
                cmp.real_roots,
                cmp.missing.len()
            ));
        }
        ok
    } else {
        let contained = cmp.extra.is_empty();
        lines.push(format!(
            "closure contained in real roots up to height {h}: {} ({} of {}; equality not asserted for indefinite types)",
            if contained { "YES" } else { "NO" },
            cmp.closure,
            cmp.real_roots
        ));
        contained
    };
    let report = json!({
        "type": d.diagram,
        "max_height": h,
        "equality_asserted": asserted,
        "real_roots": cmp.real_roots,
        "closure": cmp.closure,
        "missing": cmp.missing.iter().map(coords).collect::<Vec<_>>(),
        "extra": cmp.extra.iter().map(coords).collect::<Vec<_>>(),
        "status": if passed { "pass" } else { "fail" },
    });
    Ok(Outcome::new(lines, report, passed))
}

pub fn clifford_lemma(k: usize, l: usize, trials: usize, seed: u64) -> Result<Outcome, CliError> {
    if k == 0 || l == 0 || k * l > 16 {
        return Err(CliError::Usage(format!("need k, l >= 1 and k*l <= 16, got k={k}, l={l}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let q1 = random_symmetric(&mut rng, k);
        let q2 = loop {
            let q = random_symmetric(&mut rng, l);
            if inverse(&q).is_ok() {
                break q;
            }
        };
        let (x, s) = random_ansatz_pair(&mut rng, k, l);
        let (y, t) = random_ansatz_pair(&mut rng, k, l);
        let rep = verify_bilinear_commutator_lemma(&q1, &q2, &x, &y, &s, &t)
            .map_err(|e| CliError::Io(e.to_string()))?;
        if !rep.passed() {
            failures.push(json!({"trial": trial, "report": rep}));
        }
    }
    let passed = failures.is_empty();
    let lines = vec![format!(
        "k={k}, l={l}: {} of {trials} random quadruples satisfy the bracket formula exactly",
        trials - failures.len()
    )];
    let report = json!({
        "k": k,
        "l": l,
        "trials": trials,
        "seed": seed,
        "failures": failures,
        "status": if passed { "pass" } else { "fail" },
    });
    Ok(Outcome::new(lines, report, passed))
}

pub fn identities(d: &DiagramArgs, trials: usize, seed: u64) -> Result<Outcome, CliError> {
    let (_, r) = load(d)?;
    let ctx = SymmetrizerContext::new(&r);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<_> = (0..trials)
        .map(|_| (random_vector(&mut rng, ctx.k()), random_vector(&mut rng, ctx.k())))
        .collect();
    let report = verify_identities(&ctx, &samples);
    let lines = Identity::ALL
        .iter()
        .map(|&id| {
            format!(
                "identity {id}: {}",
                if report.passed_identity(id) { "exact on all samples" } else { "FAIL" }
            )
        })
        .collect();
    let passed = report.passed();
    let json = json!({
        "type": d.diagram,
        "trials": trials,
        "seed": seed,
        "failures": report.failures,
        "status": if passed { "pass" } else { "fail" },
    });
    Ok(Outcome::new(lines, json, passed))
}
