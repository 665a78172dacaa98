use crate::error::{Error, Result};

use super::{dot, norm};

const TOLERANCE: f64 = 1e-10;
const MAX_ITERATIONS: usize = 10_000;

/// Unit vector along the direction of maximal variance of the mean-centered
/// rows.
///
/// Power iteration runs on whichever of the centered Gram (rows x rows) or
/// scatter (dims x dims) matrix is smaller. The returned sign puts the
/// largest-magnitude component positive; callers that need a semantic
/// orientation flip it themselves. A single row has a one-dimensional span
/// and is returned normalized without centering.
pub fn first_principal_component<R: AsRef<[f64]>>(rows: &[R]) -> Result<Vec<f64>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::TooFewValues { required: 1, found: 0 });
    }
    let d = rows[0].as_ref().len();
    if let Some(bad) = rows.iter().find(|r| r.as_ref().len() != d) {
        return Err(Error::LengthMismatch {
            left: d,
            right: bad.as_ref().len(),
        });
    }
    if n == 1 {
        let r = rows[0].as_ref();
        let len = norm(r);
        if len == 0.0 {
            return Err(Error::DegenerateMatrix);
        }
        return Ok(canonical_sign(r.iter().map(|v| v / len).collect()));
    }

    let mut centroid = vec![0.0; d];
    for r in rows {
        for (c, v) in centroid.iter_mut().zip(r.as_ref()) {
            *c += v;
        }
    }
    centroid.iter_mut().for_each(|c| *c /= n as f64);
    let centered: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.as_ref().iter().zip(&centroid).map(|(v, c)| v - c).collect())
        .collect();
    if centered.iter().all(|r| r.iter().all(|&v| v == 0.0)) {
        return Err(Error::DegenerateMatrix);
    }

    let direction = if n <= d {
        let gram = SymMatrix::from_fn(n, |i, j| dot(&centered[i], &centered[j]));
        let u = dominant_eigenvector(&gram);
        let mut v = vec![0.0; d];
        for (ui, row) in u.iter().zip(&centered) {
            for (vk, rk) in v.iter_mut().zip(row) {
                *vk += ui * rk;
            }
        }
        v
    } else {
        let scatter = SymMatrix::from_fn(d, |i, j| centered.iter().map(|r| r[i] * r[j]).sum());
        dominant_eigenvector(&scatter)
    };
    let len = norm(&direction);
    if len == 0.0 || !len.is_finite() {
        return Err(Error::DegenerateMatrix);
    }
    Ok(canonical_sign(direction.into_iter().map(|v| v / len).collect()))
}

fn canonical_sign(mut v: Vec<f64>) -> Vec<f64> {
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |best, x| if x.abs() > best.abs() { x } else { best });
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        SymMatrix { n, data }
    }

    fn mul(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(&self.data[i * self.n..(i + 1) * self.n], v);
        }
    }
}

// Starts from the column with the largest diagonal entry, so flipping the
// sign of input rows flips the iterates exactly.
fn dominant_eigenvector(m: &SymMatrix) -> Vec<f64> {
    let n = m.n;
    let start = (0..n)
        .max_by(|&a, &b| m.data[a * n + a].total_cmp(&m.data[b * n + b]).then(b.cmp(&a)))
        .unwrap_or(0);
    let mut v: Vec<f64> = (0..n).map(|i| m.data[i * n + start]).collect();
    let len = norm(&v);
    v.iter_mut().for_each(|x| *x /= len);

    let mut w = vec![0.0; n];
    for _ in 0..MAX_ITERATIONS {
        m.mul(&v, &mut w);
        let lambda = dot(&v, &w);
        let residual = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - lambda * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        let len = norm(&w);
        if len == 0.0 {
            break;
        }
        let converged = residual <= TOLERANCE * lambda.abs();
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / len;
        }
        if converged {
            break;
        }
    }
    v
}
