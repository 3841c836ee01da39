//! Real right-angled hexagons built by walking the hyperboloid model.

use nalgebra::{Matrix3, Vector3};

fn boost(d: f64) -> Matrix3<f64> {
    let (c, s) = (d.cosh(), d.sinh());
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c)
}

fn left_turn() -> Matrix3<f64> {
    Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0)
}

/// Frame after walking sides `s` with a left right-angle turn after each.
fn walk(s: [f64; 6]) -> Matrix3<f64> {
    s.iter()
        .fold(Matrix3::identity(), |f, &d| f * boost(d) * left_turn())
}

fn closure(odd: [f64; 3], even: Vector3<f64>) -> Vector3<f64> {
    let f = walk([odd[0], even[0], odd[1], even[1], odd[2], even[2]]);
    Vector3::new(f[(0, 1)], f[(0, 2)], f[(1, 2)])
}

/// Even sides closing the hexagon with odd sides `odd`: Newton's method on
/// the closure condition, continued along the straight path from the
/// regular hexagon with odd sides 1.
pub fn close_hexagon(odd: [f64; 3]) -> Vector3<f64> {
    let mut x = Vector3::new(2.0, 2.0, 2.0);
    let steps = 20;
    for i in 1..=steps {
        let t = i as f64 / steps as f64;
        x = newton(odd.map(|a| 1.0 + t * (a - 1.0)), x);
    }
    x
}

fn newton(odd: [f64; 3], mut x: Vector3<f64>) -> Vector3<f64> {
    for _ in 0..100 {
        let r = closure(odd, x);
        if r.norm() < 1e-14 {
            break;
        }
        let h = 1e-7;
        let mut jac = Matrix3::zeros();
        for k in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            jac.set_column(k, &((closure(odd, xp) - closure(odd, xm)) / (2.0 * h)));
        }
        let step = jac.lu().solve(&r).expect("nonsingular Jacobian");
        let mut t = 1.0;
        while closure(odd, x - t * step).norm() > r.norm() && t > 1e-4 {
            t /= 2.0;
        }
        x -= t * step;
        x = x.map(|v| v.max(1e-3));
    }
    assert!(closure(odd, x).norm() < 1e-12, "walk did not close for {odd:?}");
    x
}
