//! Property tests for the invariants of each module.

use std::f64::consts::{FRAC_PI_2, PI};

use gauss_stokes::blockdata::{
    automorphism_mask, factor_transition, is_isomorphism, monodromy, random_block_diagonal,
    random_stokes_data, random_triangular, validate_morphism, validate_object, BlockMatrix,
    BlockStructure, StokesData, StokesMorphism, TriangularMask,
};
use gauss_stokes::cli::StokesDataFile;
use gauss_stokes::expmodel::{
    hom_allowed, stalk_dim, ExpSummand, PhiProfile, RegionSpec, Sign, StalkPoint,
};
use gauss_stokes::fourier::{check_heart, transform_aligned, transform_table_heart, SourceId};
use gauss_stokes::geometry::{
    all_stokes_directions, is_generic, numbering, order_at, order_on_sector, standard_sectors,
    stokes_directions_pair, Direction, Order, SectorOrder, SectorSpec,
};
use gauss_stokes::linalg::{self, CMat};
use gauss_stokes::oracle::{h0c_report, region_slice, OracleConfig, ZRegion};
use gauss_stokes::{Complex64, ComplexParam, GaussianParamSet, DEFAULT_EPS};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn param() -> impl Strategy<Value = ComplexParam> {
    (-3.0..3.0f64, -3.0..3.0f64)
        .prop_filter("nonzero", |(a, b)| a.hypot(*b) > 0.1)
        .prop_map(|(a, b)| ComplexParam::new(a, b).unwrap())
}

fn param_set(max: usize) -> impl Strategy<Value = GaussianParamSet> {
    prop::collection::vec(param(), 1..=max).prop_filter_map("distinct", |v| {
        GaussianParamSet::new(v.into_iter().map(|c| (c, 1)).collect(), 1e-3).ok()
    })
}

fn generic_direction(set: &GaussianParamSet, seed: f64) -> Option<Direction> {
    let th = Direction::new(seed);
    is_generic(th, set, 1e-4).then_some(th)
}

proptest! {
    #![proptest_config(ProptestConfig { max_global_rejects: 100_000, ..ProptestConfig::with_cases(200) })]

    #[test]
    fn stokes_directions_are_zeros(c in param(), d in param()) {
        prop_assume!((c.value() - d.value()).norm() > 1e-3);
        let diff = c.value() - d.value();
        for th in stokes_directions_pair(c, d, DEFAULT_EPS).unwrap() {
            let v = (diff * Complex64::from_polar(1.0, 2.0 * th.radians())).re;
            prop_assert!(v.abs() <= 1e-12 * diff.norm());
        }
    }

    #[test]
    fn order_is_antisymmetric_with_period_pi(c in param(), d in param(), th in -PI..PI) {
        prop_assume!((c.value() - d.value()).norm() > 1e-3);
        let a = order_at(Direction::new(th), c, d, DEFAULT_EPS).unwrap();
        let b = order_at(Direction::new(th), d, c, DEFAULT_EPS).unwrap();
        let flipped = match a { Order::Less => Order::Greater, Order::Greater => Order::Less, o => o };
        prop_assert_eq!(b, flipped);
        prop_assert_eq!(order_at(Direction::new(th + PI), c, d, DEFAULT_EPS).unwrap(), a);
    }

    #[test]
    fn crossing_a_stokes_direction_flips_only_its_pairs(set in param_set(3), k in 0usize..4, pick in 0usize..3) {
        let n = set.len();
        prop_assume!(n >= 2);
        let (i, j) = (pick % n, (pick + 1) % n);
        let th = stokes_directions_pair(set.param(i), set.param(j), DEFAULT_EPS).unwrap()[k].radians();
        let h = 1e-4;
        let all = all_stokes_directions(&set, DEFAULT_EPS);
        prop_assume!(all.iter().filter(|d| d.distance(Direction::new(th)) < 2.0 * h).count() == 1);
        for p in 0..n {
            for q in 0..n {
                if p == q { continue; }
                let before = order_at(Direction::new(th - h), set.param(p), set.param(q), DEFAULT_EPS).unwrap();
                let after = order_at(Direction::new(th + h), set.param(p), set.param(q), DEFAULT_EPS).unwrap();
                let same_pair = (p == i && q == j) || (p == j && q == i);
                prop_assert_eq!(before != after, same_pair);
            }
        }
    }

    #[test]
    fn numbering_sorts_totally(set in param_set(4), seed in -PI..PI) {
        let Some(th) = generic_direction(&set, seed) else { return Ok(()); };
        let order = numbering(&set, th, DEFAULT_EPS).unwrap();
        let mut seen = order.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..set.len()).collect::<Vec<_>>());
        for w in order.windows(2) {
            prop_assert_eq!(order_at(th, set.param(w[0]), set.param(w[1]), DEFAULT_EPS).unwrap(), Order::Less);
        }
    }

    #[test]
    fn sector_order_implies_pointwise_order(c in param(), d in param(), lo in -PI..PI, width in 0.0..2.0f64) {
        prop_assume!((c.value() - d.value()).norm() > 1e-3);
        let s = SectorSpec::closed(lo, lo + width);
        let o = order_on_sector(&s, c, d, DEFAULT_EPS).unwrap();
        let want = match o { SectorOrder::Less => Order::Less, SectorOrder::Greater => Order::Greater, SectorOrder::Incomparable => return Ok(()) };
        for i in 1..1000 {
            let th = lo + width * i as f64 / 1000.0;
            prop_assert_eq!(order_at(Direction::new(th), c, d, DEFAULT_EPS).unwrap(), want);
        }
    }

    #[test]
    fn standard_sectors_tile(set in param_set(3), seed in -PI..PI, probe in -PI..PI) {
        let Some(th0) = generic_direction(&set, seed) else { return Ok(()); };
        let sectors = standard_sectors(th0);
        let p = Direction::new(probe);
        if sectors.iter().all(|s| s.angle_lo().distance(p) > 1e-9 && s.angle_hi().distance(p) > 1e-9) {
            let n = sectors.iter().filter(|s| s.contains_direction_interior(p.radians(), 0.0)).count();
            prop_assert_eq!(n, 1);
        }
        for d in all_stokes_directions(&set, DEFAULT_EPS) {
            let n = sectors.iter().filter(|s| s.contains_direction_interior(d.radians(), 0.0)).count();
            prop_assert_eq!(n, 1);
        }
    }
}

fn data_strategy() -> impl Strategy<Value = StokesData> {
    (prop::collection::vec(1usize..=2, 2..=3), any::<u64>()).prop_map(|(ranks, seed)| {
        let v: Vec<_> = ranks
            .iter()
            .enumerate()
            .map(|(i, r)| (ComplexParam::new(i as f64 + 1.0, 0.0).unwrap(), *r))
            .collect();
        let set = GaussianParamSet::new(v, DEFAULT_EPS).unwrap();
        random_stokes_data(
            &set,
            Direction::new(0.0),
            &mut ChaCha8Rng::seed_from_u64(seed),
            DEFAULT_EPS,
        )
        .unwrap()
    })
}

fn conjugate(d: &StokesData, g: &BlockMatrix) -> StokesData {
    let gi = g.inverse().unwrap();
    let mut out = d.clone();
    for k in 1..=4 {
        let m = g.mul(d.sigma(k)).unwrap().mul(&gi).unwrap();
        out = out.with_sigma(k, m.into_entries()).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { max_global_rejects: 100_000, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn valid_data_has_trivial_monodromy(d in data_strategy()) {
        prop_assert!(validate_object(&d, DEFAULT_EPS).is_valid());
        let r = d.structure().total();
        let m = monodromy(&d);
        let scale = d.sigmas().iter().map(|s| s.inf_norm()).product::<f64>().max(1.0);
        prop_assert!(linalg::max_abs_diff(m.entries(), &linalg::identity(r)) <= (r * r) as f64 * DEFAULT_EPS * scale);
    }

    #[test]
    fn morphisms_form_a_category(d in data_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = d.structure().clone();
        let g = random_block_diagonal(&s, &mut rng);
        let h = random_block_diagonal(&s, &mut rng);
        let d1 = conjugate(&d, &g);
        let d2 = conjugate(&d1, &h);
        let delta = |m: &BlockMatrix| [0; 4].map(|_| m.entries().clone());
        let f = StokesMorphism::new(d.clone(), d1.clone(), delta(&g)).unwrap();
        let k = StokesMorphism::new(d1.clone(), d2.clone(), delta(&h)).unwrap();
        prop_assert!(validate_morphism(&f, 1e-8).unwrap().is_valid());
        let kf = k.compose(&f).unwrap();
        prop_assert!(validate_morphism(&kf, 1e-8).unwrap().is_valid());
        prop_assert!(is_isomorphism(&kf, 1e-8).unwrap());
        let inv = kf.inverse().unwrap();
        prop_assert!(is_isomorphism(&inv, 1e-8).unwrap());
        let id = StokesMorphism::identity(&d);
        prop_assert!(validate_morphism(&id, DEFAULT_EPS).unwrap().is_valid());
    }

    #[test]
    fn morphisms_survive_the_transform(d in data_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_block_diagonal(d.structure(), &mut rng);
        let d1 = conjugate(&d, &g);
        let delta = [0; 4].map(|_| g.entries().clone());
        let t0 = transform_aligned(&d, DEFAULT_EPS).unwrap();
        let t1 = transform_aligned(&d1, DEFAULT_EPS).unwrap();
        let m = StokesMorphism::new(t0.clone(), t1, delta).unwrap();
        prop_assert!(validate_morphism(&m, 1e-8).unwrap().is_valid());
        let lam = Complex64::new(0.3, -2.0);
        let sc = StokesMorphism::scalar(&t0, lam);
        prop_assert!(validate_morphism(&sc, DEFAULT_EPS).unwrap().is_valid());
    }

    #[test]
    fn order_transport(d in data_strategy()) {
        let t = transform_aligned(&d, DEFAULT_EPS).unwrap();
        let before = numbering(d.params(), d.theta0(), DEFAULT_EPS).unwrap();
        let after = numbering(t.params(), t.theta0(), DEFAULT_EPS).unwrap();
        // params keep their slots under c -> -1/c
        prop_assert_eq!(before, after);
        for (c, ch) in d.params().values().iter().zip(t.params().values()) {
            prop_assert!((ch + 1.0 / c).norm() < 1e-14);
        }
    }

    #[test]
    fn file_round_trip(d in data_strategy()) {
        let text = StokesDataFile::from_data(&d).to_json();
        let back = StokesDataFile::parse(&text).unwrap().to_data().unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(StokesDataFile::from_data(&back).to_json(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { max_global_rejects: 100_000, ..ProptestConfig::with_cases(200) })]

    #[test]
    fn mask_without_stokes_direction_is_triangular(set in param_set(3), lo in -PI..PI, width in 0.01..1.5f64) {
        let s = SectorSpec::closed(lo, lo + width);
        let dirs = all_stokes_directions(&set, DEFAULT_EPS);
        let th = Direction::new(lo + width / 2.0);
        prop_assume!(dirs.iter().all(|d| !s.contains_direction(d.radians(), 1e-6)));
        let mask = automorphism_mask(&s, &set, DEFAULT_EPS).unwrap();
        let order = numbering(&set, th, DEFAULT_EPS).unwrap();
        let n = set.len();
        for p in 0..n {
            for q in 0..n {
                prop_assert_eq!(mask.allowed(order[p], order[q]), p >= q);
            }
        }
    }

    #[test]
    fn mask_with_one_stokes_direction(set in param_set(3), k in 0usize..4, pick in 0usize..3, h in 0.01..0.3f64) {
        let n = set.len();
        prop_assume!(n >= 2);
        let (i, j) = (pick % n, (pick + 1) % n);
        let th = stokes_directions_pair(set.param(i), set.param(j), DEFAULT_EPS).unwrap()[k].radians();
        let s = SectorSpec::closed(th - h, th + h);
        let dirs = all_stokes_directions(&set, DEFAULT_EPS);
        prop_assume!(dirs.iter().filter(|d| s.contains_direction(d.radians(), 1e-6)).count() == 1);
        let mask = automorphism_mask(&s, &set, DEFAULT_EPS).unwrap();
        prop_assert!(!mask.allowed(i, j) && !mask.allowed(j, i));
        let inside = numbering(&set, Direction::new(th + h / 2.0), DEFAULT_EPS);
        if let Ok(order) = inside {
            let pos: Vec<usize> = (0..n).map(|x| order.iter().position(|&y| y == x).unwrap()).collect();
            for p in 0..n {
                for q in 0..n {
                    let pair = (p == i && q == j) || (p == j && q == i);
                    if p != q && !pair {
                        prop_assert_eq!(mask.allowed(p, q), pos[p] > pos[q]);
                    }
                }
            }
        }
    }

    #[test]
    fn factorization_reconstructs(sizes in prop::collection::vec(1usize..=3, 2..=4), seed in any::<u64>(), a in 0usize..3, b in 1usize..4) {
        let s = BlockStructure::new(sizes.clone()).unwrap();
        let n = sizes.len();
        let (l, lp) = (a % (n - 1), (a % (n - 1)) + 1 + b % (n - 1 - a % (n - 1)));
        let m = random_triangular(&s, false, &mut ChaCha8Rng::seed_from_u64(seed));
        let (app, ap) = factor_transition(&m, l, lp).unwrap();
        let prod = app.mul(&ap).unwrap();
        prop_assert!(linalg::inf_norm(&(prod.entries() - m.entries())) <= 10.0 * DEFAULT_EPS * m.inf_norm());
        prop_assert!(linalg::max_abs(&app.block(lp, l)) <= 10.0 * DEFAULT_EPS * m.inf_norm());
        // A' differs from the identity only in block (lp, l)
        for p in 0..n {
            for q in 0..n {
                if (p, q) != (lp, l) {
                    let want = if p == q { linalg::identity(sizes[p]) } else { CMat::zeros(sizes[p], sizes[q]) };
                    prop_assert!(linalg::max_abs_diff(&ap.block(p, q), &want) == 0.0);
                }
            }
        }
    }

    #[test]
    fn masked_products_respect_composition(n in 2usize..5, seed in any::<u64>(), bits1 in any::<u32>(), bits2 in any::<u32>()) {
        use rand::Rng;
        let m1 = TriangularMask::from_fn(n, |j, k| j == k || (bits1 >> (j * n + k)) & 1 == 1);
        let m2 = TriangularMask::from_fn(n, |j, k| j == k || (bits2 >> (j * n + k)) & 1 == 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fill = |m: &TriangularMask, rng: &mut ChaCha8Rng| {
            CMat::from_fn(n, n, |j, k| if m.allowed(j, k) { Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) } else { Complex64::new(0.0, 0.0) })
        };
        let a = fill(&m1, &mut rng);
        let b = fill(&m2, &mut rng);
        let p = a * b;
        let comp = m1.compose(&m2);
        for j in 0..n {
            for k in 0..n {
                if !comp.allowed(j, k) {
                    prop_assert!(p[(j, k)].norm() == 0.0);
                }
            }
        }
    }
}

fn aligned_c() -> impl Strategy<Value = Complex64> {
    (0.2..3.0f64, -1.4..1.4f64).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

fn heart_pair() -> impl Strategy<Value = (ComplexParam, ComplexParam)> {
    (0.2..2.0f64, 0.0..2.0f64, 0.05..3.0f64, 0.0..2.0f64).prop_filter_map(
        "heart",
        |(c1, c2, e1, e2)| {
            let c = ComplexParam::new(c1, c2).unwrap();
            let d1 = c1 + e1;
            let d = ComplexParam::new(d1, d1 * (c2 / c1) + e2).unwrap();
            check_heart(c, d, DEFAULT_EPS).then_some((c, d))
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig { max_global_rejects: 100_000, ..ProptestConfig::with_cases(200) })]

    #[test]
    fn aligned_plus_dominates_minus(c in aligned_c(), w1 in -5.0..5.0f64, w2 in -5.0..5.0f64) {
        let w = Complex64::new(w1, w2);
        for (p, m) in [
            (PhiProfile::aligned_right(c, Sign::Plus), PhiProfile::aligned_right(c, Sign::Minus)),
            (PhiProfile::aligned_left(c, Sign::Plus), PhiProfile::aligned_left(c, Sign::Minus)),
        ] {
            prop_assert!(p.eval(w) >= m.eval(w) - 1e-12 * (1.0 + w.norm_sqr()));
        }
    }

    #[test]
    fn heart_plus_dominates_minus_on_regions((c, d) in heart_pair(), w1 in -5.0..5.0f64, w2 in -5.0..5.0f64) {
        let w = Complex64::new(w1, w2);
        let t = transform_table_heart(c, d, DEFAULT_EPS).unwrap();
        for src in SourceId::ALL {
            let e = t.get(src, 1);
            if let gauss_stokes::expmodel::SummandKind::Interval { plus, minus } = e.kind {
                if gauss_stokes::expmodel::in_region(&e.region, w) {
                    prop_assert!(plus.eval(w) >= minus.eval(w) - 1e-12 * (1.0 + w.norm_sqr()), "{:?} at {}", src, w);
                }
            }
        }
    }

    #[test]
    fn profiles_are_continuous_across_case_lines((c, d) in heart_pair(), s in -5.0..5.0f64) {
        let profiles = [
            PhiProfile::aligned_right(c.value(), Sign::Plus), PhiProfile::aligned_right(c.value(), Sign::Minus),
            PhiProfile::aligned_left(c.value(), Sign::Plus), PhiProfile::aligned_left(c.value(), Sign::Minus),
            PhiProfile::heart_right(c.value(), d.value(), Sign::Plus), PhiProfile::heart_right(c.value(), d.value(), Sign::Minus),
            PhiProfile::heart_left(c.value(), d.value(), Sign::Plus), PhiProfile::heart_left(c.value(), d.value(), Sign::Minus),
        ];
        for p in profiles {
            for (a, b) in p.case_lines() {
                let n = Complex64::new(a, b) / a.hypot(b);
                let on = Complex64::new(-n.im, n.re) * s;
                let h = 1e-9;
                let jump = (p.eval(on + n * h) - p.eval(on - n * h)).abs();
                prop_assert!(jump <= 1e-6 * (1.0 + on.norm_sqr()), "{:?} jump {}", p.kind, jump);
            }
        }
    }

    #[test]
    fn interval_stalks_are_half_open(c in aligned_c(), w1 in -5.0..5.0f64, w2 in -5.0..5.0f64) {
        let w = Complex64::new(w1, w2);
        let e = ExpSummand::interval(
            RegionSpec::WholePlane,
            PhiProfile::aligned_right(c, Sign::Plus),
            PhiProfile::aligned_right(c, Sign::Minus),
        );
        let hi = -PhiProfile::aligned_right(c, Sign::Minus).eval(w);
        let lo = -PhiProfile::aligned_right(c, Sign::Plus).eval(w);
        prop_assert_eq!(stalk_dim(&e, &StalkPoint { w, t: hi }), 0);
        prop_assert_eq!(stalk_dim(&e, &StalkPoint { w, t: hi + 1.0 }), 0);
        prop_assert_eq!(stalk_dim(&e, &StalkPoint { w, t: lo - 1e-9 * (1.0 + lo.abs()) }), 0);
        if lo < hi {
            prop_assert_eq!(stalk_dim(&e, &StalkPoint { w, t: lo }), 1);
        }
    }

    #[test]
    fn degenerate_direction_gives_empty_interval(c in aligned_c(), s in -5.0..5.0f64) {
        // c₂w₁ = c₁w₂: w is a real multiple of c
        let w = c / c.norm() * s;
        for (p, m) in [
            (PhiProfile::aligned_right(c, Sign::Plus), PhiProfile::aligned_right(c, Sign::Minus)),
            (PhiProfile::aligned_left(c, Sign::Plus), PhiProfile::aligned_left(c, Sign::Minus)),
        ] {
            prop_assert!((p.eval(w) - m.eval(w)).abs() <= 1e-9 * (1.0 + s * s));
        }
    }

    #[test]
    fn hom_allowed_matches_growth(c in aligned_c(), d in aligned_c(), lo in -PI..PI, width in 0.05..1.5f64) {
        // a morphism E^{φ_src} -> E^{φ_dst} exists iff φ_dst - φ_src is bounded above
        prop_assume!((c - d).norm() > 1e-3);
        let s = SectorSpec::closed(lo, lo + width);
        let cp = ComplexParam::from_complex(c).unwrap();
        let dp = ComplexParam::from_complex(d).unwrap();
        let stokes = stokes_directions_pair(cp, dp, DEFAULT_EPS).unwrap();
        prop_assume!(stokes.iter().all(|t| !s.contains_direction(t.radians(), 1e-3)));
        let region = RegionSpec::Sector(s);
        let src = ExpSummand::one_sided(region, PhiProfile::pure_quadratic(c));
        let dst = ExpSummand::one_sided(region, PhiProfile::pure_quadratic(d));
        let probes: Vec<Complex64> = (0..=200)
            .flat_map(|i| [1.0, 5.0].map(move |r| Complex64::from_polar(r, lo + width * i as f64 / 200.0)))
            .collect();
        let allowed = hom_allowed(&src, &dst, &probes).unwrap();
        let gap = |z: Complex64| PhiProfile::pure_quadratic(d).eval(z) - PhiProfile::pure_quadratic(c).eval(z);
        let grows = (0..=200).any(|i| {
            let z = Complex64::from_polar(1.0, lo + width * i as f64 / 200.0);
            gap(z * 1e3) > gap(z)
        });
        prop_assert_eq!(allowed, !grows);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { max_global_rejects: 100_000, ..ProptestConfig::with_cases(40) })]

    #[test]
    fn occupancy_is_monotone_in_t(c in aligned_c(), w1 in -3.0..3.0f64, w2 in -3.0..3.0f64, t in -3.0..3.0f64, dt in 0.0..2.0f64, lo in -PI..PI, width in 0.1..3.0f64) {
        prop_assume!(c.re > 0.1);
        let w = Complex64::new(w1, w2);
        let region = ZRegion::from_sector(Some(&SectorSpec::closed(lo, lo + width)));
        let a = region_slice(c, &region, w, t, 8.0, 96);
        let b = region_slice(c, &region, w, t + dt, 8.0, 96);
        for j in 0..a.nrows() {
            for i in 0..a.ncols {
                if a.occupied(i, j) {
                    prop_assert!(b.occupied(i, j));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { max_global_rejects: 100_000, ..ProptestConfig::with_cases(24) })]

    #[test]
    fn h0c_is_resolution_independent(w1 in -3.0..3.0f64, w2 in -3.0..3.0f64, t in -3.0..3.0f64, k in 0usize..4) {
        let c = Complex64::new(1.0, 0.5);
        let table = gauss_stokes::fourier::transform_table_aligned(ComplexParam::from_complex(c).unwrap()).unwrap();
        let src = SourceId::ALL[k];
        let p = StalkPoint::new(w1, w2, t);
        prop_assume!(!gauss_stokes::oracle::in_delta_band(table.get(src, 0), &p, 1e-2));
        let sector = src.z_sector(table.base_arg).unwrap();
        let run = |n| h0c_report(c, sector.as_ref(), p.w, t, &OracleConfig { resolution: n, ..OracleConfig::default() }).unwrap().compact_count;
        let coarse = run(256);
        prop_assert_eq!(coarse, run(512));
        prop_assert_eq!(coarse, stalk_dim(table.get(src, 0), &p));
        prop_assert!(coarse <= 1);
    }
}

#[test]
fn sectors_have_quarter_width() {
    for th in [-3.0, -1.0, 0.2, 2.5] {
        for s in standard_sectors(Direction::new(th)) {
            assert!((s.width - FRAC_PI_2).abs() < 1e-15);
        }
    }
}
