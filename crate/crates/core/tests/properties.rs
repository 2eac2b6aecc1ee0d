use std::f64::consts::PI;

use proptest::prelude::*;
use triangle_ifs::hyptrig::{self, TraceCoords};
use triangle_ifs::plane_model;
use triangle_ifs::shape::{self, AngleShape};
use triangle_ifs::subdivision::{self, Letter};
use triangle_ifs::{ShapeRecord, SymbolSequence};

fn edges(lo: f64, hi: f64) -> impl Strategy<Value = [f64; 3]> {
    [lo..hi, lo..hi, lo..hi].prop_filter("triangle inequality", |e| {
        hyptrig::check_edges(e[0], e[1], e[2]).is_ok()
    })
}

fn letter() -> impl Strategy<Value = Letter> {
    prop::sample::select(Letter::ALL.to_vec())
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn edges_angles_round_trip(e in edges(0.01, 5.0)) {
        let (a, b, c) = hyptrig::angles_from_edges(e[0], e[1], e[2]).unwrap();
        let (x, y, z) = hyptrig::edges_from_angles(a, b, c).unwrap();
        for (got, want) in [x, y, z].into_iter().zip(e) {
            prop_assert!((got - want).abs() <= 1e-8 * want.max(1.0), "{got} vs {want}");
        }
    }

    #[test]
    fn angles_edges_round_trip(w in [0.01f64..1.0, 0.01f64..1.0, 0.01f64..1.0], total in 0.05f64..PI - 1e-3) {
        let k = total / (w[0] + w[1] + w[2]);
        let [a, b, c] = w.map(|x| x * k);
        let (x, y, z) = hyptrig::edges_from_angles(a, b, c).unwrap();
        let (p, q, r) = hyptrig::angles_from_edges(x, y, z).unwrap();
        for (got, want) in [p, q, r].into_iter().zip([a, b, c]) {
            prop_assert!((got - want).abs() <= 1e-10 * want, "{got} vs {want}");
        }
    }

    #[test]
    fn area_formulas_agree(e in edges(0.01, 5.0)) {
        let [a, b, c] = e;
        let s = ShapeRecord::from_edges(a, b, c).unwrap();
        let [x, y, z] = s.angles.0;
        let defect = hyptrig::defect_area(x, y, z).unwrap();
        let cagnoli = hyptrig::cagnoli_area(a, b, c, x).unwrap();
        let md = hyptrig::medial_data(a, b, c).unwrap();
        let [ma, mb, mc] = md.midlines();
        let (alpha, _, _) = hyptrig::angles_from_edges(ma, mb, mc).unwrap();
        let keogh = hyptrig::keogh_area(mb, mc, alpha).unwrap();
        let trace = hyptrig::trace_parent_area(&TraceCoords::from_edges(ma, mb, mc)).unwrap();
        let own = hyptrig::area_from_edges(a, b, c).unwrap();
        for v in [cagnoli, keogh, trace, own] {
            prop_assert!((v - defect).abs() < 1e-9, "{v} vs {defect}");
        }
    }

    #[test]
    fn lambert_identity(e in edges(0.01, 5.0)) {
        let md = hyptrig::medial_data(e[0], e[1], e[2]).unwrap();
        for ((x, m), l) in e.iter().zip(md.midlines()).zip(md.lambert_legs()) {
            let lhs = (x / 2.0).sinh();
            let rhs = m.sinh() * l.cosh();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0));
            prop_assert!(m < x / 2.0);
        }
    }

    #[test]
    fn mu_decreases_with_scale(e in edges(0.05, 2.0), k in 1.05f64..2.0) {
        let small = hyptrig::medial_data(e[0], e[1], e[2]).unwrap().mu;
        let big = hyptrig::medial_data(k * e[0], k * e[1], k * e[2]).unwrap().mu;
        prop_assert!(small <= 1.0 && big < small);
    }

    #[test]
    fn maps_are_equivariant(e in edges(0.05, 4.0), l in letter(), p in 0usize..6) {
        let perm = PERMS[p];
        let s = ShapeRecord::from_edges(e[0], e[1], e[2]).unwrap();
        let lhs = subdivision::apply(l, &s).unwrap().permuted(perm);
        let rhs = subdivision::apply(l.permuted(perm), &s.permuted(perm)).unwrap();
        prop_assert!(shape::metric_distance(&lhs.angles, &rhs.angles) < 1e-12);
    }

    #[test]
    fn limits_are_equivariant(
        e in edges(0.05, 4.0),
        prefix in prop::collection::vec(letter(), 0..4),
        cycle in prop::collection::vec(letter(), 1..3),
        p in 0usize..6,
    ) {
        let perm = PERMS[p];
        let s = ShapeRecord::from_edges(e[0], e[1], e[2]).unwrap();
        let seq = SymbolSequence::new(prefix, cycle).unwrap();
        let lhs = subdivision::limit_shape(&seq, &s, 1e-13).unwrap().angles.permuted(perm);
        let rhs = subdivision::limit_shape(&seq.permuted(perm), &s.permuted(perm), 1e-13).unwrap().angles;
        prop_assert!(shape::metric_distance(&lhs, &rhs) < 1e-10);
        prop_assert!((lhs.sum() - PI).abs() < 1e-12 && lhs.min() > 0.0);
    }

    #[test]
    fn euclidean_shapes_are_fixed(a in 0.05f64..1.5, b in 0.05f64..1.5, l in letter()) {
        prop_assume!(a + b < PI - 0.05);
        let s = ShapeRecord::from_angles(a, b, PI - a - b).unwrap();
        prop_assert_eq!(subdivision::apply(l, &s).unwrap(), s);
    }

    #[test]
    fn closed_form_matches_hyperboloid(e in edges(0.01, 5.0), l in letter()) {
        let edges = triangle_ifs::EdgeLengths(e);
        let closed = subdivision::child_edges(l, &edges).unwrap();
        let oracle = subdivision::apply_oracle(l, &edges).unwrap();
        for (x, y) in closed.0.iter().zip(oracle.0) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let placed = plane_model::place(&edges).unwrap();
        let angles = subdivision::child_cell(l, &placed).angles().unwrap();
        let child = ShapeRecord::from_edge_lengths(closed).unwrap();
        prop_assert!(shape::metric_distance(&AngleShape(angles), &child.angles) < 1e-10 * 3f64.sqrt());
    }
}
