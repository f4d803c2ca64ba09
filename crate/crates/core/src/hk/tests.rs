use super::*;
use crate::groebner::ModuleDimension;
use num_bigint::BigInt;

fn quartic() -> RingPresentation {
    RingPresentation::parse(5, &["x1", "x2", "x3", "x4"], &["x1^4 + x2^4 + x3^4 + x4^4"]).unwrap()
}

fn determinantal() -> RingPresentation {
    RingPresentation::parse(
        3,
        &["x1", "x2", "x3", "x4", "x5", "x6"],
        &["x1*x5 - x2*x4", "x1*x6 - x3*x4", "x2*x6 - x3*x5"],
    )
    .unwrap()
}

fn plane(p: u64) -> RingPresentation {
    RingPresentation::parse(p, &["x", "y"], &[]).unwrap()
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn polys(ring: &RingPresentation, texts: &[&str]) -> Vec<Polynomial> {
    texts.iter().map(|t| ring.parse_poly(t).unwrap()).collect()
}

fn column(ring: &RingPresentation, texts: &[&str]) -> Vec<Polynomial> {
    polys(ring, texts)
}

fn values(ring: &RingPresentation, module: &ModulePresentation, ideal: &IdealHandle, n_max: u32) -> Vec<u64> {
    series(ring, module, ideal, n_max, &Budget::default())
        .into_result()
        .unwrap()
        .values()
        .into_iter()
        .map(|v| u64::try_from(v).unwrap())
        .collect()
}

#[test]
fn bracket_powers() {
    let r = plane(2);
    let b = bracket_power(&r.parse_ideal(&["x", "y"]).unwrap(), &r, 1).unwrap();
    assert_eq!(b.q, 2);
    assert_eq!(b.generators, polys(&r, &["x^2", "y^2"]));

    let q = quartic();
    let b = bracket_power(&q.maximal_ideal(), &q, 1).unwrap();
    assert_eq!(b.generators, polys(&q, &["x1^5", "x2^5", "x3^5", "x4^5"]));

    let b = bracket_power(&r.parse_ideal(&["x + y", "y"]).unwrap(), &r, 1).unwrap();
    assert_eq!(b.generators, polys(&r, &["x^2 + y^2", "y^2"]));
    let lhs = crate::ideal_basis(r.poly_ring(), &b.generators, &Budget::default()).unwrap();
    let rhs = crate::ideal_basis(r.poly_ring(), &polys(&r, &["x^2", "y^2"]), &Budget::default()).unwrap();
    for g in rhs.polynomials() {
        assert!(lhs.normal_form_poly(&g).unwrap().is_zero());
    }
    for g in lhs.polynomials() {
        assert!(rhs.normal_form_poly(&g).unwrap().is_zero());
    }
}

#[test]
fn bracket_power_zero_is_the_ideal() {
    let r = determinantal();
    let ideal = r.parse_ideal(&["x1 + x5", "x2*x3 - x6^2", "x4"]).unwrap();
    let b = bracket_power(&ideal, &r, 0).unwrap();
    assert_eq!(b.q, 1);
    assert_eq!(b.generators, ideal.generators());
}

#[test]
fn bracket_power_overflow() {
    let r = plane(5);
    let err = bracket_power(&r.maximal_ideal(), &r, 40).unwrap_err();
    assert_eq!(err, Error::ExponentOverflow);
}

#[test]
fn m_primary_checks() {
    let budget = Budget::default();
    let r = plane(3);
    assert!(check_m_primary(&r.maximal_ideal(), &r, &budget).unwrap());
    let x = r.parse_ideal(&["x"]).unwrap();
    assert!(!check_m_primary(&x, &r, &budget).unwrap());
    assert_eq!(x.is_m_primary(), Some(false));
    let q = quartic();
    assert!(check_m_primary(&q.maximal_ideal(), &q, &budget).unwrap());
    let d = determinantal();
    assert!(check_m_primary(&d.maximal_ideal(), &d, &budget).unwrap());
}

#[test]
fn regular_rings() {
    for p in [2u64, 3, 5] {
        for d in 1..=3usize {
            let vars: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
            let names: Vec<&str> = vars.iter().map(String::as_str).collect();
            let r = RingPresentation::parse(p, &names, &[]).unwrap();
            assert_eq!(r.dim(), d);
            let got = values(&r, &ModulePresentation::ring(), &r.maximal_ideal(), 3);
            let want: Vec<u64> = (0..=3).map(|n| p.pow(n).pow(d as u32)).collect();
            assert_eq!(got, want, "p = {p}, d = {d}");
        }
    }
}

#[test]
fn quartic_values() {
    let r = quartic();
    assert_eq!(r.dim(), 3);
    assert_eq!(values(&r, &ModulePresentation::ring(), &r.maximal_ideal(), 2), vec![1, 339, 43017]);
}

#[test]
fn determinantal_values() {
    let r = determinantal();
    assert_eq!(r.dim(), 4);
    assert_eq!(values(&r, &ModulePresentation::ring(), &r.maximal_ideal(), 2), vec![1, 123, 10467]);
}

#[test]
fn free_module_matches_ring() {
    let r = quartic();
    let m = r.maximal_ideal();
    let budget = Budget::default();
    for n in 0..=1 {
        let cyclic = en_cyclic(&r, &[], &m, n, &budget).unwrap();
        assert_eq!(en_module(&r, &ModulePresentation::free(1), &m, n, &budget).unwrap(), cyclic);
        assert_eq!(
            en_module(&r, &ModulePresentation::free(2), &m, n, &budget).unwrap(),
            cyclic.clone() * 2u32
        );
    }
}

#[test]
fn ideal_as_module_over_the_plane() {
    let r = plane(2);
    let j = ModulePresentation::ideal_as_module(polys(&r, &["x", "y"]));
    let e = en_module(&r, &j, &r.maximal_ideal(), 1, &Budget::default()).unwrap();
    assert_eq!(e, big(5));
    let e0 = en_module(&r, &j, &r.maximal_ideal(), 0, &Budget::default()).unwrap();
    assert_eq!(e0, big(2));
}

#[test]
fn principal_ideal_is_free() {
    let r = quartic();
    let m = r.maximal_ideal();
    let budget = Budget::default();
    let j = ModulePresentation::ideal_as_module(polys(&r, &["x1^2 + x2*x3"]));
    assert_eq!(module_rank(&r, &j, &budget).unwrap(), 1);
    for n in 0..=1 {
        assert_eq!(delta_n(&r, &j, &m, n, 1, &budget).unwrap(), BigInt::from(0));
    }
}

#[test]
fn delta_of_ring_vanishes() {
    let budget = Budget::default();
    for r in [quartic(), determinantal(), plane(3)] {
        for n in 0..=1 {
            let d = delta_n(&r, &ModulePresentation::ring(), &r.maximal_ideal(), n, 1, &budget).unwrap();
            assert_eq!(d, BigInt::from(0));
        }
    }
}

#[test]
fn additivity_and_delta_additivity() {
    let budget = Budget::default();
    let r = determinantal();
    let m = r.maximal_ideal();
    let a = ModulePresentation::coker(2, vec![column(&r, &["x1", "x4"]), column(&r, &["x2", "x5"])]).unwrap();
    let b = ModulePresentation::cyclic(polys(&r, &["x3", "x6"]));
    let sum = a.direct_sum(&b).unwrap();
    for n in 0..=1 {
        let ea = en_module(&r, &a, &m, n, &budget).unwrap();
        let eb = en_module(&r, &b, &m, n, &budget).unwrap();
        assert_eq!(en_module(&r, &sum, &m, n, &budget).unwrap(), ea + eb);
    }
    let ra = module_rank(&r, &a, &budget).unwrap();
    let rb = module_rank(&r, &b, &budget).unwrap();
    assert_eq!(module_rank(&r, &sum, &budget).unwrap(), ra + rb);
    let da = delta_n(&r, &a, &m, 1, ra, &budget).unwrap();
    let db = delta_n(&r, &b, &m, 1, rb, &budget).unwrap();
    assert_eq!(delta_n(&r, &sum, &m, 1, ra + rb, &budget).unwrap(), da + db);
}

#[test]
fn presentation_invariance() {
    let budget = Budget::default();
    let r = quartic();
    let m = r.maximal_ideal();
    let base = ModulePresentation::coker(2, vec![column(&r, &["x1", "x2"]), column(&r, &["x3^2", "0"])]).unwrap();
    let redundant = ModulePresentation::coker(
        2,
        vec![
            column(&r, &["x1", "x2"]),
            column(&r, &["x3^2", "0"]),
            column(&r, &["x1*x4 + 2*x3^2", "x2*x4"]),
        ],
    )
    .unwrap();
    let column_op = ModulePresentation::coker(
        2,
        vec![column(&r, &["x1 + 3*x3^2", "x2"]), column(&r, &["x3^2", "0"])],
    )
    .unwrap();
    let row_op = ModulePresentation::coker(2, vec![column(&r, &["x1", "x2 + 2*x1"]), column(&r, &["x3^2", "2*x3^2"])]).unwrap();
    for n in 0..=1 {
        let e = en_module(&r, &base, &m, n, &budget).unwrap();
        for other in [&redundant, &column_op, &row_op] {
            assert_eq!(en_module(&r, other, &m, n, &budget).unwrap(), e, "n = {n}");
        }
    }
}

#[test]
fn first_value_is_quotient_by_ideal() {
    let budget = Budget::default();
    let r = plane(3);
    let ideal = r.parse_ideal(&["x^2", "y^3", "x*y"]).unwrap();
    let j = ModulePresentation::cyclic(polys(&r, &["x + y^2"]));
    assert_eq!(en_module(&r, &ModulePresentation::ring(), &ideal, 0, &budget).unwrap(), big(4));
    assert_eq!(en_module(&r, &j, &ideal, 0, &budget).unwrap(), big(3));
}

#[test]
fn tor_examples() {
    let budget = Budget::default();
    let r = plane(2);
    let m = r.maximal_ideal();
    let t = ModulePresentation::cyclic(polys(&r, &["x"]));
    for n in 0..=4 {
        assert_eq!(tor1_length(&r, &t, &m, n, &budget).unwrap(), big(1 << n));
    }
    let zero = ModulePresentation::coker(1, vec![column(&r, &["1"])]).unwrap();
    let free = ModulePresentation::free(2);
    for n in 0..=2 {
        assert_eq!(tor1_length(&r, &zero, &m, n, &budget).unwrap(), big(0));
        assert_eq!(tor1_length(&r, &free, &m, n, &budget).unwrap(), big(0));
    }
}

#[test]
fn dimensions() {
    let budget = Budget::default();
    let q = quartic();
    let t = ModulePresentation::cyclic(polys(&q, &["x1"]));
    assert_eq!(
        module_dimension(&q, &t, &budget).unwrap(),
        ModuleDimension {
            dim: 2,
            zero_module: false
        }
    );
    assert_eq!(module_dimension(&q, &ModulePresentation::free(2), &budget).unwrap().dim, 3);
    let zero = ModulePresentation::coker(2, vec![column(&q, &["1", "0"]), column(&q, &["0", "1"])]).unwrap();
    assert_eq!(
        module_dimension(&q, &zero, &budget).unwrap(),
        ModuleDimension {
            dim: 0,
            zero_module: true
        }
    );
    let j = ModulePresentation::ideal_as_module(polys(&q, &["x1", "x2"]));
    assert_eq!(module_dimension(&q, &j, &budget).unwrap().dim, 3);
}

#[test]
fn infinite_colength_is_an_error() {
    let r = plane(3);
    let x = r.parse_ideal(&["x"]).unwrap();
    let err = en_cyclic(&r, &[], &x, 1, &Budget::default()).unwrap_err();
    assert_eq!(err, Error::InfiniteColength);
    let out = series(&r, &ModulePresentation::ring(), &x, 2, &Budget::default());
    assert_eq!(out.failures.len(), 3);
}

#[test]
fn series_is_ordered_and_deterministic() {
    let r = quartic();
    let m = r.maximal_ideal();
    let a = series(&r, &ModulePresentation::ring(), &m, 2, &Budget::default()).into_result().unwrap();
    let b = series(&r, &ModulePresentation::ring(), &m, 2, &Budget::default()).into_result().unwrap();
    assert_eq!(a, b);
    let ns: Vec<u32> = a.entries.iter().map(|e| e.n).collect();
    assert_eq!(ns, vec![0, 1, 2]);
    let qs: Vec<u64> = a.entries.iter().map(|e| e.q).collect();
    assert_eq!(qs, vec![1, 5, 25]);
}

#[test]
fn delta_series_from_values() {
    let ring = HkSeries::from_values(3, &[1, 9, 81]);
    let module = HkSeries::from_values(3, &[2, 20, 170]);
    let d = delta_series(&module, &ring, 2).unwrap();
    let v: Vec<BigInt> = d.entries.iter().map(|e| e.value.clone()).collect();
    assert_eq!(v, vec![BigInt::from(0), BigInt::from(2), BigInt::from(8)]);
    let short = HkSeries::from_values(3, &[1]);
    assert!(delta_series(&module, &short, 2).is_err());
}
