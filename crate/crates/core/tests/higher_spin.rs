use kmspin_core::cartan::{parse_gcm, realization, Realization};
use kmspin_core::exactnum::QMatrix;
use kmspin_core::extender::{
    build_extended_rep, check_xmap, convert_convention, extend_to_closure, lambda_pairs, root_pairs,
    Convention, XMap,
};
use kmspin_core::halfspin::{build_half_spin, gammas};
use kmspin_core::higherspin::{
    five_half_map, three_half_map, x_five_half, x_three_half, HigherSpinError, SymmetrizerContext,
};
use kmspin_core::rootsys::{iterated_sum_closure, lambda_set, real_roots, Root};
use kmspin_core::weylrep::{x_from_weyl, Space};

type MapFn = fn(&SymmetrizerContext, &[Root], Convention) -> Result<XMap, HigherSpinError>;

fn three(c: &SymmetrizerContext, d: &[Root], conv: Convention) -> Result<XMap, HigherSpinError> {
    three_half_map(c, d, conv)
}

fn five(c: &SymmetrizerContext, d: &[Root], conv: Convention) -> Result<XMap, HigherSpinError> {
    five_half_map(c, d, conv)
}

const SPINS: [(&str, MapFn); 2] = [("3/2", three), ("5/2", five)];

fn setup(name: &str) -> (kmspin_core::Gcm, Realization, SymmetrizerContext) {
    let g = parse_gcm(name).unwrap();
    let r = realization(&g).unwrap();
    let c = SymmetrizerContext::new(&r);
    (g, r, c)
}

#[test]
fn closed_forms_satisfy_relations_on_real_root_pairs() {
    for name in ["A3", "D4", "A~2"] {
        let (g, r, c) = setup(name);
        let low: Vec<Root> = real_roots(&r, 6).into_iter().collect();
        let domain: Vec<Root> = real_roots(&r, 12).into_iter().collect();
        let pairs = root_pairs(&r, &low);
        assert!(!pairs.is_empty());
        let gs = gammas(&build_half_spin(&g).unwrap()).unwrap();
        for (spin, build) in SPINS {
            for conv in [Convention::Plain, Convention::Coord] {
                let x = build(&c, &domain, conv).unwrap();
                let report = check_xmap(&x, &r, &pairs).unwrap();
                assert!(report.passed(), "{name} {spin} {conv:?}: {:?}", report.violations.first());
            }
            let x = build(&c, &domain, Convention::Plain).unwrap();
            let rep = build_extended_rep(&x, &r, &gs, &g).unwrap();
            assert_eq!(rep.dim(), x.dim() * gs.dim());
        }
    }
}

#[test]
fn coordinate_maps_convert_to_plain_maps() {
    for name in ["A2", "A3", "D4", "A~2", "D~4"] {
        let (_, r, c) = setup(name);
        let domain: Vec<Root> = real_roots(&r, 4).into_iter().collect();
        for (spin, build) in SPINS {
            let plain = build(&c, &domain, Convention::Plain).unwrap();
            let coord = build(&c, &domain, Convention::Coord).unwrap();
            assert_eq!(convert_convention(&coord).unwrap(), plain, "{name} {spin}");
            assert_eq!(convert_convention(&plain).unwrap(), coord, "{name} {spin}");
        }
    }
}

#[test]
fn closure_extension_reproduces_closed_forms() {
    for name in ["A3", "D4", "A~2", "D~4", "E6"] {
        let (g, r, c) = setup(name);
        let lambda = lambda_set(&r, &g.diagram());
        let closure = iterated_sum_closure(&r, 6);
        for (spin, build) in SPINS {
            let x = build(&c, lambda.roots(), Convention::Plain).unwrap();
            let ext = extend_to_closure(&x, &r, &closure).unwrap();
            assert_eq!(ext.map.len(), closure.len());
            for gamma in closure.roots() {
                let expected = if spin == "3/2" {
                    x_three_half(&c, gamma, Convention::Plain).unwrap()
                } else {
                    x_five_half(&c, gamma, Convention::Plain).unwrap()
                };
                assert_eq!(ext.map.get(gamma), Some(&expected), "{name} {spin} {gamma}");
            }
        }
    }
}

#[test]
fn lambda_sweep_on_e10() {
    let (_, r, c) = setup("E10");
    let g = parse_gcm("E10").unwrap();
    let lambda = lambda_set(&r, &g.diagram());
    let x = three_half_map(&c, lambda.roots(), Convention::Plain).unwrap();
    assert!(check_xmap(&x, &r, &lambda_pairs(&r, &lambda)).unwrap().passed());
}

#[test]
fn closed_forms_are_shifted_reflections() {
    for name in ["A2", "D4", "A~2"] {
        let (_, r, c) = setup(name);
        let roots: Vec<Root> = real_roots(&r, 5).into_iter().collect();
        let h = x_from_weyl(&r, Space::H, &roots).unwrap();
        let s2 = x_from_weyl(&r, Space::Sym2, &roots).unwrap();
        for a in &roots {
            assert_eq!(h.get(a).unwrap(), &x_three_half(&c, a, Convention::Plain).unwrap());
            assert_eq!(s2.get(a).unwrap(), &x_five_half(&c, a, Convention::Plain).unwrap());
        }
    }
}

#[test]
fn three_half_plus_projection_is_half() {
    let (_, r, c) = setup("D~4");
    for a in real_roots(&r, 5) {
        let x = x_three_half(&c, &a, Convention::Plain).unwrap();
        let coords = a.rational_coords();
        let up: Vec<_> = (0..r.k())
            .map(|j| (0..r.k()).map(|i| &coords[i] * &r.gram()[(i, j)]).sum())
            .collect();
        let pi = QMatrix::from_fn(r.k(), r.k(), |i, j| &coords[i] * &up[j]);
        assert_eq!(&x + &pi, QMatrix::scalar(r.k(), kmspin_core::Rational::new(1, 2)));
    }
}
