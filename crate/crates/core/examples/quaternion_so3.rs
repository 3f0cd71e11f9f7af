//! Pure generalized vector fields built from left quaternion multiplication on
//! ℝ⁴ close into so(3) when `ε ≠ 0` and commute when `ε = 0`.

use genform::gvector::{left_quaternion_matrices, levi_civita3, quaternion_fields, quaternion_relations_hold};
use genform::ring::{frac, int};

fn main() {
    let j = left_quaternion_matrices();
    println!("J_i J_j = ε_ijk J_k, J_i² = -1: {}", quaternion_relations_hold(&j));
    for eps in [int(1), int(-2), frac(1, 2), int(0)] {
        let v = quaternion_fields(&eps);
        let mut ok = true;
        for a in 0..3 {
            for b in 0..3 {
                let bracket = v[a].bracket(&v[b]);
                let expected = if eps == int(0) {
                    v[0].scale(&int(0))
                } else {
                    (0..3).fold(v[0].scale(&int(0)), |acc, c| &acc + &v[c].scale(&int(levi_civita3(a, b, c))))
                };
                ok &= bracket == expected;
            }
        }
        let rel = if eps == int(0) { "[V_i, V_j] = 0" } else { "[V_i, V_j] = ε_ijk V_k" };
        println!("ε = {eps:>4}: {rel}: {ok}");
    }
}
