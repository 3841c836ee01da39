use std::f64::consts::PI;

mod common;

use common::close_hexagon;
use qfs_core::hexagon::{hexagon_residuals, solve_hexagon};
use qfs_core::C64;

#[test]
fn real_hexagons_match_the_walk() {
    let triples = [
        [1.0, 1.0, 1.0],
        [0.5, 2.0, 1.3],
        [2.9, 0.7, 1.8],
        [3.0, 3.0, 0.5],
        [1.7, 2.2, 2.6],
    ];
    for odd in triples {
        let even = close_hexagon(odd);
        let ipi = C64::new(0.0, PI);
        let hex = solve_hexagon(
            C64::new(odd[0], 0.0) + ipi,
            C64::new(odd[1], 0.0) + ipi,
            C64::new(odd[2], 0.0) + ipi,
        )
        .unwrap();
        for (k, n) in [2, 4, 6].into_iter().enumerate() {
            let s = hex.side(n);
            assert!((s.re - even[k]).abs() < 1e-9, "{odd:?}: side {n} = {s} vs {}", even[k]);
            assert!((s.im - PI).abs() < 1e-9, "{odd:?}: side {n} = {s}");
        }
        let (cosine, sine) = hexagon_residuals(&hex);
        assert!(cosine < 1e-10 && sine < 1e-10);
    }
}

#[test]
fn walk_recovers_classical_formula() {
    let odd = [0.9, 1.4, 2.1];
    let even = close_hexagon(odd);
    let expected = ((odd[0].cosh() + odd[1].cosh() * odd[2].cosh()) / (odd[1].sinh() * odd[2].sinh())).acosh();
    assert!((even[1] - expected).abs() < 1e-10);
}
