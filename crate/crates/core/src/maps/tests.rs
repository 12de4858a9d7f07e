use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::biquad::{branch_roots, eval_s};
use crate::numeric::MpComplex;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rand_c(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

fn qrt_map(rng: &mut ChaCha8Rng) -> MapId {
    MapId::Qrt {
        q1: BiquadParams::from_array(std::array::from_fn(|_| rand_c(rng, 1.0))),
        q2: BiquadParams::from_array(std::array::from_fn(|_| rand_c(rng, 1.0))),
    }
}

#[test]
fn apply_examples() {
    assert_eq!(MapId::TwoDimLogistic.apply(&[c(2.0), c(-1.0)]).unwrap(), vec![c(-2.0), c(3.0)]);
    let one = vec![c(1.0); 3];
    assert_eq!(MapId::LV3.apply(&one).unwrap(), one);
}

#[test]
fn integrable_normal_form_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let h = Complex64::from_polar(1.3, 0.7);
    let nf = MapId::NormalForm { h, hp: 1.0 / h };
    for _ in 0..10 {
        let z = rand_c(&mut rng, 2.0);
        let z5 = nf.iterate(&[z], 5).unwrap()[0];
        assert!(rel(z5, z * h.powi(-5)) < 1e-12);
    }
}

#[test]
fn invariant_examples() {
    let bc = MapId::TwoDimBC { b: c(1.0), c: c(0.0) };
    assert_eq!(bc.invariants_of(&[c(2.0), c(3.0)]).unwrap(), vec![c(-3.0)]);
    assert_eq!(MapId::LV3.invariants_of(&[c(1.0); 3]).unwrap(), vec![c(1.0), c(0.0)]);
}

#[test]
fn lv_long_orbit_keeps_invariants_at_extended_precision() {
    let bits = 160;
    let start = [Complex64::new(0.4, 0.3), Complex64::new(1.2, -0.5), Complex64::new(0.7, 0.9)];
    let mut x: Vec<MpComplex> = start.iter().map(|z| MpComplex::new(*z, bits)).collect();
    let h0: Vec<Complex64> = MapId::LV3.invariants_of(&x).unwrap().iter().map(|v| v.to_c64()).collect();
    let mut drift: f64 = 0.0;
    for _ in 0..1000 {
        x = MapId::LV3.apply(&x).unwrap();
        let h = MapId::LV3.invariants_of(&x).unwrap();
        for (a, b) in h.iter().zip(&h0) {
            drift = drift.max((a.to_c64() - b).norm() / b.norm());
        }
    }
    assert!(drift < 1e-9, "drift {drift}");
}

#[test]
fn wrong_dimension_and_unknown_ids() {
    assert!(matches!(MapId::LV3.apply(&[c(1.0)]), Err(MapError::Dimension { expected: 3, got: 1, .. })));
    assert!(matches!("henon".parse::<MapId>(), Err(MapError::UnknownId(_))));
    assert!(matches!("2d-bc".parse::<MapId>(), Err(MapError::MissingParameter { .. })));
    assert_eq!("lv3".parse::<MapId>().unwrap(), MapId::LV3);
    let params = [("h".to_string(), c(2.0)), ("hp".to_string(), c(0.5))].into_iter().collect();
    assert_eq!(MapId::from_id("normal-form", &params).unwrap(), MapId::NormalForm { h: c(2.0), hp: c(0.5) });
}

#[test]
fn poles_are_reported() {
    let one_d = reduce_two_dim(c(2.0), c(1.0), c(3.0));
    assert!(matches!(one_d.apply(&[c(0.5)]), Err(MapError::Pole { denominator: "1-bx", .. })));
    // 1 - x + xy = 0
    assert!(matches!(
        MapId::LV3.apply(&[c(2.0), c(0.5), c(1.0)]),
        Err(MapError::Pole { denominator: "1-x+xy", .. })
    ));
    assert!(matches!(MapId::LV3.apply(&[c(0.0), c(2.0), c(1.0)]), Err(MapError::Pole { .. })));
}

#[test]
fn reduction_special_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (h, b) = (rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0));
    for _ in 0..10 {
        let x = rand_c(&mut rng, 1.0);
        let mobius = reduce_two_dim(b, c(0.0), h).apply(&[x]).unwrap()[0];
        assert!(rel(mobius, h * x / (1.0 - b * x)) < 1e-14);
        let cc = rand_c(&mut rng, 1.0);
        let logistic = reduce_two_dim(c(0.0), cc, h).apply(&[x]).unwrap()[0];
        assert!(rel(logistic, h * x * (1.0 - cc * x)) < 1e-14);
    }
}

#[test]
fn reduction_agrees_with_two_dimensional_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let (b, cc) = (rand_c(&mut rng, 1.0), rand_c(&mut rng, 1.0));
        let (x, y) = (rand_c(&mut rng, 1.0), rand_c(&mut rng, 1.0));
        let map = MapId::TwoDimBC { b, c: cc };
        let img = map.apply(&[x, y]).unwrap();
        let h = map.invariants_of(&[x, y]).unwrap()[0];
        let big_x = reduce_two_dim(b, cc, h).apply(&[x]).unwrap()[0];
        assert!(rel(img[0], big_x) < 1e-12);
        assert!(rel(img[1], companion_y(b, cc, h, big_x).unwrap()) < 1e-10);
    }
}

#[test]
fn conjugacy_to_normal_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let conj = conjugate_to_normal(c(0.7), c(0.0), Complex64::new(1.5, 0.4)).unwrap();
    assert!(rel(conj.h * conj.hp, c(1.0)) < 1e-15);
    for _ in 0..100 {
        let (b, cc, h) = (rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0));
        let conj = conjugate_to_normal(b, cc, h).unwrap();
        let x = rand_c(&mut rng, 1.0);
        let via_x = conj.z_of_x(reduce_two_dim(b, cc, h).apply(&[x]).unwrap()[0]).unwrap();
        let via_z = conj.normal_form().apply(&[conj.z_of_x(x).unwrap()]).unwrap()[0];
        assert!(rel(via_x, via_z) < 1e-10);
        assert!(rel(conj.x_of_z(conj.z_of_x(x).unwrap()).unwrap(), x) < 1e-12);
    }
    // x = 0 is fixed and corresponds to z = ∞
    let conj = conjugate_to_normal(c(1.0), c(0.5), c(2.0)).unwrap();
    assert_eq!(reduce_two_dim(c(1.0), c(0.5), c(2.0)).apply(&[c(0.0)]).unwrap()[0], c(0.0));
    assert!(matches!(conj.z_of_x(c(0.0)), Err(MapError::Pole { .. })));
    let far = conj.normal_form().apply(&[c(1e8)]).unwrap()[0];
    assert!(far.norm() > 1e7);
    assert!(matches!(conjugate_to_normal(c(1.0), c(1.0), c(2.0)), Err(MapError::Degenerate(_))));
}

#[test]
fn normal_form_fixed_point_multipliers() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let (h, hp) = (rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0));
        for (z, m) in normal_form_fixed_points(h, hp) {
            assert!(rel(normal_form(h, hp, z).unwrap(), z) < 1e-12);
            let eps = 1e-6 * (1.0 + z.norm());
            let fd = (normal_form(h, hp, z + eps).unwrap() - normal_form(h, hp, z - eps).unwrap()) / (2.0 * eps);
            assert!((fd - m).norm() < 1e-6 * (1.0 + m.norm()), "{fd} vs {m}");
            assert!(rel(normal_form_derivative(h, hp, z).unwrap(), m) < 1e-10);
        }
        // ∞ in the chart w = 1/z: W = w (w + h) / (1 + h' w) has multiplier h
        let w = 1e-7;
        let img = normal_form(h, hp, c(1.0 / w)).unwrap();
        assert!(rel((1.0 / img) / w, h) < 1e-5);
    }
}

#[test]
fn critical_points_have_zero_derivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let (h, hp) = (rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0));
        for z in normal_form_critical_points(h, hp) {
            let d = normal_form_derivative(h, hp, z).unwrap();
            assert!(d.norm() < 1e-10, "{d}");
        }
    }
}

#[test]
fn inverse_branches_map_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..20 {
        let (h, hp, z) = (rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0));
        for w in normal_form_inverse(h, hp, z) {
            assert!(rel(normal_form(h, hp, w).unwrap(), z) < 1e-10);
        }
    }
    // h h' = 1: the branches become h z and -1/h
    let h = c(1.7);
    let [p, m] = normal_form_inverse(h, 1.0 / h, c(0.3));
    assert!(rel(p, h * 0.3) < 1e-14 && rel(m, -1.0 / h) < 1e-14);
}

#[test]
fn qrt_conserves_h_and_matches_biquadratic_branch() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let map = qrt_map(&mut rng);
        let MapId::Qrt { q1, q2 } = &map else { unreachable!() };
        let pt = [rand_c(&mut rng, 1.0), rand_c(&mut rng, 1.0)];
        let h0 = map.invariants_of(&pt).unwrap()[0];
        let next = map.apply(&pt).unwrap();
        let h1 = map.invariants_of(&next).unwrap()[0];
        assert!(rel(h0, h1) < 1e-10);
        // on the level set q = q' + h q'' both x_n and x_{n+2} solve S(·, x_{n+1}; q) = 0
        let q = BiquadParams::from_array(std::array::from_fn(|i| *q1.as_array()[i] + h0 * *q2.as_array()[i]));
        assert!(eval_s(&next[1], &pt[1], &q).norm() < 1e-9 * (1.0 + h0.norm()));
        let roots = branch_roots(pt[1], &q).unwrap();
        let hit = |z: Complex64| roots.iter().any(|r| rel(*r, z) < 1e-8);
        assert!(hit(pt[0]) && hit(next[1]));
    }
}

#[test]
fn qrt_with_zero_second_pencil_is_a_pole() {
    let q1 = BiquadParams::from_array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0].map(c));
    let q2 = BiquadParams::from_array([c(0.0); 6]);
    assert!(matches!(qrt_step(&q1, &q2, c(0.3), c(0.4)), Err(MapError::Pole { .. })));
}

fn catalog(rng: &mut ChaCha8Rng) -> Vec<MapId> {
    vec![
        MapId::TwoDimLogistic,
        MapId::TwoDimBC { b: rand_c(rng, 1.0), c: rand_c(rng, 1.0) },
        MapId::LV3,
        MapId::PainleveV,
        qrt_map(rng),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn invariants_are_conserved(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for map in catalog(&mut rng) {
            let x: Vec<Complex64> = (0..map.dimension()).map(|_| rand_c(&mut rng, 1.5)).collect();
            let (Ok(img), Ok(h0)) = (map.apply(&x), map.invariants_of(&x)) else { continue };
            let Ok(h1) = map.invariants_of(&img) else { continue };
            prop_assert_eq!(h0.len(), map.num_invariants());
            for (a, b) in h0.iter().zip(&h1) {
                // stay away from near-poles, where double precision cannot hold 1e-10
                let size = x.iter().chain(&img).map(|z| z.norm()).fold(0.0, f64::max);
                if size < 1e3 {
                    prop_assert!((a - b).norm() / (1.0 + a.norm()) < 1e-10, "{}: {} vs {}", map, a, b);
                }
            }
        }
    }

    #[test]
    fn conjugacy_commutes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (b, cc, h) = (rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0));
        prop_assume!((b - cc).norm() > 1e-2 && (1.0 - h).norm() > 1e-2 && h.norm() > 1e-2);
        let conj = conjugate_to_normal(b, cc, h).unwrap();
        let x = rand_c(&mut rng, 1.0);
        let Ok(fx) = reduce_two_dim(b, cc, h).apply(&[x]) else { return Ok(()) };
        let (Ok(z1), Ok(zx)) = (conj.z_of_x(fx[0]), conj.z_of_x(x)) else { return Ok(()) };
        let Ok(z2) = conj.normal_form().apply(&[zx]) else { return Ok(()) };
        let scale = 1.0 + zx.norm() + z1.norm();
        prop_assume!(scale < 1e4);
        prop_assert!((z1 - z2[0]).norm() / scale < 1e-10);
    }
}
