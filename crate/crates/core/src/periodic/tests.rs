use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::maps::MapId;
use crate::numeric::{aberth, MpComplex};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn generic() -> (Complex64, Complex64) {
    (c(0.6, 0.1), c(2.1, 0.0))
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

/// Matches two root lists one-to-one within `tol`.
fn bijective(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        let best = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .min_by(|p, q| (p.1 - x).norm().total_cmp(&(q.1 - x).norm()));
        match best {
            Some((i, y)) if (y - x).norm() < tol => {
                used[i] = true;
                true
            }
            _ => false,
        }
    })
}

#[test]
fn compose_one_is_the_map() {
    let (h, hp) = generic();
    let rf = compose_n(h, hp, 1).unwrap();
    assert_eq!(rf.num.coeffs, vec![c(0.0, 0.0), hp, c(1.0, 0.0)]);
    assert_eq!(rf.den.coeffs, vec![c(1.0, 0.0), h]);
    for z in [c(0.3, -0.2), c(-2.0, 1.0), c(5.0, 0.0)] {
        assert!(close(rf.eval(&z), normal_form(h, hp, z).unwrap(), 1e-14));
    }
}

#[test]
fn compose_degrees_double() {
    let (h, hp) = generic();
    for n in 1..=6 {
        let rf = compose_n(h, hp, n).unwrap();
        assert_eq!(rf.num.degree(), 1 << n);
        assert_eq!(rf.den.degree(), (1 << n) - 1);
        assert_eq!(rf.degree(), rf.degree_bound);
    }
    assert_eq!(compose_n(h, hp, 2).unwrap().degree(), 4);
}

#[test]
fn compose_matches_iteration() {
    // dense evaluation loses accuracy near the root cluster, so compare at 256 bits
    let (h, hp) = generic();
    for n in 1..=6 {
        let rf = compose_n_with::<MpComplex>(h, hp, n, 256).unwrap();
        for z in [c(0.1, 0.2), c(-0.5, 0.05), c(1.5, -1.0)] {
            let z = MpComplex::new(z, 256);
            let (w, _) = iterate_with_derivative(h, hp, &z, n).unwrap();
            assert!((rf.eval(&z) - w.clone()).norm() < 1e-40 * (1.0 + w.norm()), "n={n}");
        }
    }
}

#[test]
fn integrable_composition_is_linear() {
    let h = c(0.7, 0.2);
    let hp = 1.0 / h;
    for n in 1..=6 {
        let rf = compose_n(h, hp, n).unwrap();
        assert_eq!(rf.num.degree(), 1);
        assert_eq!(rf.den.degree(), 0);
        let z = c(0.4, -1.3);
        assert!(close(rf.eval(&z), z / h.powu(n as u32), 1e-14));
    }
}

#[test]
fn compose_rejects_out_of_range_period() {
    let (h, hp) = generic();
    assert_eq!(compose_n(h, hp, 0).unwrap_err(), PeriodicError::Period(0));
    assert_eq!(compose_n(h, hp, N_MAX + 1).unwrap_err(), PeriodicError::Period(N_MAX + 1));
    assert!(periodic_points(h, hp, N_MAX + 1).is_err());
}

#[test]
fn count_formula_values() {
    let recursive: Vec<u64> = (2..=9).map(count_formula).collect();
    assert_eq!(recursive, vec![2, 6, 12, 30, 54, 126, 240, 504]);
    for n in 2..8 {
        assert_eq!(count_formula_closed(n), count_formula(n) as i64, "n={n}");
    }
    // with two nested divisors the closed form double counts
    assert_eq!(count_formula_closed(8), 238);
}

#[test]
fn count_formula_matches_mobius_inversion() {
    // exact period n points of a degree-2 map on the sphere, minus ∞ at n = 1
    fn mobius(n: usize) -> i64 {
        let mut m = 1i64;
        let mut k = n;
        let mut p = 2;
        while p * p <= k {
            if k % p == 0 {
                k /= p;
                if k % p == 0 {
                    return 0;
                }
                m = -m;
            }
            p += 1;
        }
        if k > 1 {
            m = -m;
        }
        m
    }
    for n in 2..=10usize {
        let exact: i64 = (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| mobius(n / d) * ((1i64 << d) + 1))
            .sum();
        assert_eq!(exact, count_formula(n) as i64, "n={n}");
    }
}

#[test]
fn counts_at_generic_parameters() {
    let (h, hp) = generic();
    for n in 2..=7 {
        let r = periodic_report(h, hp, n).unwrap();
        assert_eq!(r.roots, 1 << n);
        assert_eq!(r.points.len() as u64, count_formula(n), "n={n}");
        for p in &r.points {
            let (w, _) = iterate_with_derivative(h, hp, &p.z, n).unwrap();
            assert!((w - p.z).norm() < RESIDUAL_TOLERANCE, "n={n} z={}", p.z);
            assert_eq!(p.period, n);
        }
    }
}

#[test]
fn fixed_points_and_multipliers() {
    let (h, hp) = generic();
    let pts = periodic_points(h, hp, 1).unwrap();
    assert_eq!(pts.len(), 2);
    let zp = (1.0 - hp) / (1.0 - h);
    let expected = [(c(0.0, 0.0), hp), (zp, (2.0 - h - hp) / (1.0 - h * hp))];
    for (z, m) in expected {
        let p = pts.iter().find(|p| close(p.z, z, 1e-10)).expect("fixed point found");
        assert!(close(p.multiplier, m, 1e-10));
        assert_eq!(p.class, Class::of(m));
    }
}

#[test]
fn classification_thresholds() {
    assert_eq!(Class::of(c(1.5, 0.0)), Class::Repelling);
    assert_eq!(Class::of(c(0.0, 0.5)), Class::Attracting);
    assert_eq!(Class::of(c(0.0, 1.0)), Class::Neutral);
    assert_eq!(Class::of(c(1.0 + 0.1 * CLASS_TOLERANCE, 0.0)), Class::Neutral);
    assert_eq!(Class::Attracting.to_string(), "attracting");
}

#[test]
fn cycles_close_under_the_map() {
    let (h, hp) = generic();
    let map = MapId::NormalForm { h, hp };
    for n in 2..=6 {
        for p in periodic_points(h, hp, n).unwrap() {
            let back = map.iterate(&[p.z], n).unwrap()[0];
            assert!((back - p.z).norm() < 1e-8, "n={n}");
        }
    }
}

#[test]
fn cycle_multiplier_is_independent_of_start() {
    let (h, hp) = generic();
    for n in 2..=6 {
        let pts = periodic_points(h, hp, n).unwrap();
        for p in &pts {
            let mut z = p.z;
            for _ in 0..n {
                z = normal_form(h, hp, z).unwrap();
                let q = pts.iter().find(|q| close(q.z, z, 1e-7)).expect("orbit stays in the set");
                assert!(close(q.multiplier, p.multiplier, 1e-6));
                assert!(close(cycle_multiplier(h, hp, z, n).unwrap(), p.multiplier, 1e-6));
            }
        }
    }
}

#[test]
fn divisor_closure_and_disjointness() {
    let (h, hp) = generic();
    let by_period: Vec<Vec<Complex64>> = (1..=6)
        .map(|n| periodic_points(h, hp, n).unwrap().iter().map(|p| p.z).collect())
        .collect();
    for n in 2..=6usize {
        let all = find_roots::<Complex64>(h, hp, n, ()).unwrap();
        for m in (1..n).filter(|m| n % m == 0) {
            for z in &by_period[m - 1] {
                assert!(all.iter().any(|w| close(*w, *z, 1e-6)), "period {m} point missing at n={n}");
            }
        }
        for m in 1..n {
            for z in &by_period[n - 1] {
                assert!(by_period[m - 1].iter().all(|w| !close(*w, *z, 1e-7)));
            }
        }
    }
}

#[test]
fn brute_force_oracle_for_low_periods() {
    let (h, hp) = generic();
    for n in 1..=3usize {
        let p = compose_n(h, hp, n).unwrap().fixed_point_polynomial();
        let lead = p.coeffs.last().unwrap().norm();
        let r = 1.0 + p.coeffs.iter().map(|a| a.norm() / lead).fold(0.0, f64::max);
        let mut found: Vec<Complex64> = Vec::new();
        let steps = 80;
        for i in 0..=steps {
            for j in 0..=steps {
                let mut z = c(-r + 2.0 * r * i as f64 / steps as f64, -r + 2.0 * r * j as f64 / steps as f64);
                let mut ok = false;
                for _ in 0..100 {
                    let Ok((w, d)) = iterate_with_derivative(h, hp, &z, n) else { break };
                    let g = w - z;
                    if g.norm() < 1e-13 * (1.0 + z.norm()) {
                        ok = true;
                        break;
                    }
                    z -= g / (d - 1.0);
                    if !z.norm().is_finite() || z.norm() > 10.0 * r {
                        break;
                    }
                }
                if ok && z.norm() <= r && !found.iter().any(|f| (f - z).norm() < 1e-6) {
                    found.push(z);
                }
            }
        }
        let roots = aberth(&p, Default::default()).unwrap();
        assert!(bijective(&roots, &found, 1e-6), "n={n}: {} vs {}", roots.len(), found.len());
    }
}

#[test]
fn fossil_point_lists() {
    let h = c(0.7, 0.0);
    let f2 = fossil_points(h, 2);
    assert!(close(f2[0], -1.0 / h, 1e-15) && f2[1] == c(-1.0, 0.0));
    assert_eq!(f2.len(), 2);
    let f4 = fossil_points(c(2.0, 0.0), 4);
    assert_eq!(f4, vec![c(-0.5, 0.0), c(-1.0, 0.0), c(-2.0, 0.0), c(-4.0, 0.0)]);
    assert!(dist_to_fossil(c(-2.1, 0.0), &f4).abs() - 0.1 < 1e-12);
}

#[test]
fn extended_precision_near_integrable_limit() {
    let h = c(0.7, 0.0);
    assert_eq!(periodic_report(h, (1.0 + 1e-2) / h, 3).unwrap().bits, 53);
    let r = periodic_report(h, (1.0 + 1e-4) / h, 3).unwrap();
    assert!(r.bits >= START_BITS);
    assert_eq!(r.points.len(), 6);
}

#[test]
fn fossil_distance_is_linear_in_delta() {
    let h = c(0.7, 0.0);
    for n in 2..=5 {
        let grid = [2e-4, 1e-4];
        let rows = transition_scan(h, n, &grid).unwrap();
        let s = summarize(&rows, &grid);
        for t in &s {
            assert_eq!(t.count as u64, count_formula(n), "n={n} δ={}", t.delta);
        }
        let ratio = s[0].max_dist / s[1].max_dist;
        assert!((ratio - 2.0).abs() < 0.4, "n={n}: halving δ changed d_max by {ratio}");
        let k = s.iter().map(|t| t.max_dist / t.delta).fold(0.0, f64::max);
        for row in &rows {
            assert!(row.dist_to_fossil <= k * row.delta);
        }
    }
}

#[test]
fn transition_scan_monotone_and_empty_at_limit() {
    let h = c(0.7, 0.0);
    let grid = [1e-2, 1e-3, 1e-4, 0.0];
    let rows = transition_scan(h, 4, &grid).unwrap();
    let s = summarize(&rows, &grid);
    assert!(s.windows(2).take(2).all(|w| w[1].max_dist < w[0].max_dist));
    assert_eq!(s[3].count, 0);
    assert!(rows.iter().all(|r| r.period == 4));
}

#[test]
fn near_fossil_multipliers_diverge() {
    // the surviving points become strongly repelling, they do not turn neutral
    let h = c(0.7, 0.0);
    let grid = [1e-2, 1e-3, 1e-4];
    let s = summarize(&transition_scan(h, 4, &grid).unwrap(), &grid);
    assert!(s.windows(2).all(|w| w[1].max_abs_multiplier > 10.0 * w[0].max_abs_multiplier));
    let rows = transition_scan(h, 4, &grid).unwrap();
    assert!(rows.iter().all(|r| r.class == Class::Repelling));
}

#[test]
fn transition_scan_validates_grid() {
    let h = c(0.7, 0.0);
    assert!(transition_scan(h, 3, &[1e-3, 1e-2]).is_err());
    assert!(transition_scan(h, 3, &[f64::NAN]).is_err());
}

#[test]
fn csv_row_format() {
    let row = TransitionRow {
        delta: 1e-3,
        period: 4,
        z: c(-1.0, 0.5),
        multiplier: c(2.0, 0.0),
        class: Class::Repelling,
        dist_to_fossil: 0.25,
    };
    let line = row.csv_line();
    assert_eq!(line.split(',').count(), TRANSITION_CSV_HEADER.split(',').count());
    assert!(line.starts_with("1e-3,4,"));
    assert!(line.contains(",repelling,"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn counts_match_formula_for_random_parameters(
        hr in 0.2f64..0.9, hi in -0.3f64..0.3, pr in 1.3f64..3.0, pi in -0.5f64..0.5, n in 2usize..=5,
    ) {
        let (h, hp) = (c(hr, hi), c(pr, pi));
        let pts = periodic_points(h, hp, n).unwrap();
        prop_assert_eq!(pts.len() as u64, count_formula(n));
        for p in &pts {
            let (w, _) = iterate_with_derivative(h, hp, &p.z, n).unwrap();
            prop_assert!((w - p.z).norm() < RESIDUAL_TOLERANCE);
        }
    }
}
