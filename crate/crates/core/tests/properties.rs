use nalgebra::Complex;
use proptest::prelude::*;

use shape_currents::currents::{evaluate_current, QuadratureRule};
use shape_currents::curve::{self, FourierCoeffs, SampledCurve};
use shape_currents::embed::{pca, ShapeDataset};
use shape_currents::metric;
use shape_currents::reconstruct::{power_sums, recover_points_from_moments};
use shape_currents::{build_space, GramOperator, Point, SpaceDescriptor, DEFAULT_SIGMA};

fn shape(coeffs: &[(f64, f64)], n: usize) -> SampledCurve {
    let mut f = FourierCoeffs::new().with(1, Complex::new(0.4, 0.0));
    for (k, &(re, im)) in coeffs.iter().enumerate() {
        f.set(k as i32 + 2, Complex::new(re, im));
        f.set(-(k as i32) - 1, Complex::new(im, re) * 0.5);
    }
    curve::fourier_shape(&f, n).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-0.05..0.05f64, -0.05..0.05f64), 1..4)
}

fn spaces() -> impl Strategy<Value = SpaceDescriptor> {
    prop_oneof![
        (2usize..6).prop_map(SpaceDescriptor::monomial),
        (2usize..7, 1usize..4).prop_map(|(m, p)| SpaceDescriptor::lagrange(m, p)),
    ]
}

fn rule() -> impl Strategy<Value = QuadratureRule> {
    prop_oneof![Just(QuadratureRule::Midpoint), Just(QuadratureRule::Simpson)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reversal_negates_current(c in coeffs(), desc in spaces(), rule in rule()) {
        let space = build_space(&desc).unwrap();
        let a = shape(&c, 96);
        let f = evaluate_current(&a, &space, rule).unwrap();
        let r = evaluate_current(&a.reverse_orientation(), &space, rule).unwrap();
        let sum = f.add_scaled(&r, 1.0).unwrap();
        prop_assert!(sum.max_abs() <= 1e-12 * (1.0 + f.max_abs()));
    }

    #[test]
    fn open_pieces_add_up(c in coeffs(), desc in spaces(), split in 10usize..80) {
        let space = build_space(&desc).unwrap();
        let a = shape(&c, 90);
        let pts = a.points();
        let mut first: Vec<Point> = pts[..=split].to_vec();
        let mut second: Vec<Point> = pts[split..].to_vec();
        second.push(pts[0]);
        first.dedup();
        second.dedup();
        let whole = evaluate_current(&a, &space, QuadratureRule::Midpoint).unwrap();
        let p = evaluate_current(&SampledCurve::open_from_points(first).unwrap(), &space, QuadratureRule::Midpoint).unwrap();
        let q = evaluate_current(&SampledCurve::open_from_points(second).unwrap(), &space, QuadratureRule::Midpoint).unwrap();
        let diff = whole.difference(&p.add_scaled(&q, 1.0).unwrap()).unwrap();
        prop_assert!(diff.max_abs() <= 1e-12);
    }

    #[test]
    fn distance_is_symmetric(c1 in coeffs(), c2 in coeffs(), s in 1u32..3) {
        let g = GramOperator::assemble(build_space(&SpaceDescriptor::lagrange(6, 1)).unwrap(), DEFAULT_SIGMA).unwrap();
        let f1 = evaluate_current(&shape(&c1, 128), g.space(), QuadratureRule::Midpoint).unwrap();
        let f2 = evaluate_current(&shape(&c2, 128), g.space(), QuadratureRule::Midpoint).unwrap();
        let d12 = metric::distance(&f1, &f2, &g, s).unwrap();
        let d21 = metric::distance(&f2, &f1, &g, s).unwrap();
        prop_assert_eq!(d12, d21);
        prop_assert_eq!(metric::distance(&f1, &f1, &g, s).unwrap(), 0.0);
        let w = metric::whiten_all(&[f1, f2], &g, s).unwrap();
        prop_assert!((w[0].distance(&w[1]) - d12).abs() <= 1e-10 * (1.0 + d12));
    }

    #[test]
    fn moments_round_trip(mut xs in prop::collection::vec(-1.0..1.0f64, 1..5)) {
        xs.sort_by(f64::total_cmp);
        let separated = xs.windows(2).all(|w| w[1] - w[0] > 0.05);
        prop_assume!(separated);
        let n = xs.len();
        let got = recover_points_from_moments(&power_sums(&xs, n), n).unwrap();
        for (a, b) in got.iter().zip(&xs) {
            prop_assert!((a - b).abs() < 1e-8, "{:?} vs {:?}", got, xs);
        }
    }

    #[test]
    fn pca_commutes_with_permutation(
        rows in prop::collection::vec(prop::collection::vec(-1.0..1.0f64, 4), 4..9),
        shift in 1usize..8,
    ) {
        let n = rows.len();
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let a = pca(&ShapeDataset::new(labels.clone(), rows.clone()).unwrap(), 2).unwrap();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let permuted: Vec<Vec<f64>> = perm.iter().map(|&i| rows[i].clone()).collect();
        let b = pca(&ShapeDataset::new(labels, permuted).unwrap(), 2).unwrap();
        // compare pairwise distances, which do not depend on eigenvector signs
        for i in 0..n {
            for j in 0..n {
                let da: f64 = a.coords[perm[i]].iter().zip(&a.coords[perm[j]]).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
                let db: f64 = b.coords[i].iter().zip(&b.coords[j]).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
                prop_assert!((da - db).abs() < 1e-8);
            }
        }
    }
}
