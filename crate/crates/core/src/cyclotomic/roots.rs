use num_complex::Complex64;

use super::{CycloError, CycloPoly};

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dv = dv * z + v;
        v = v * z + c;
    }
    (v, dv)
}

/// Roots of a complex polynomial with simple roots, by Aberth iteration
/// followed by Newton polishing.
fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![-monic[0]];
    }
    // Start on a circle of the geometric-mean radius, slightly rotated so no
    // start point sits on a symmetry axis of real or cyclotomic inputs.
    let radius = monic[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, dv) = horner(&monic, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = horner(&monic, *r);
            if dv.norm() == 0.0 {
                break;
            }
            *r -= v / dv;
        }
    }
    z
}

/// All complex roots (with multiplicity) of `P` under the embedding
/// `zeta -> exp(2 pi i a / p)`. Repeated roots are separated exactly first
/// (squarefree decomposition), so each numeric solve sees simple roots.
pub fn complex_roots(poly: &CycloPoly, a: i64) -> Result<Vec<Complex64>, CycloError> {
    let mut out = Vec::new();
    for (factor, mult) in poly.squarefree_decomposition() {
        let coeffs = factor.embed_complex(a)?;
        let roots = aberth(&coeffs);
        for _ in 0..mult {
            out.extend_from_slice(&roots);
        }
    }
    Ok(out)
}
