use super::ProjectionResult;
use crate::error::{check_finite, Error, Result};

/// Least-squares nonincreasing fit by pool-adjacent-violators.
pub fn isotonic_nonincreasing(s: &[f64]) -> Vec<f64> {
    // blocks of (sum, count), each block mean strictly below the previous
    let mut sums: Vec<f64> = Vec::with_capacity(s.len());
    let mut counts: Vec<usize> = Vec::with_capacity(s.len());
    for &v in s {
        sums.push(v);
        counts.push(1);
        while sums.len() > 1 {
            let k = sums.len() - 1;
            let mean_last = sums[k] / counts[k] as f64;
            let mean_prev = sums[k - 1] / counts[k - 1] as f64;
            if mean_prev >= mean_last {
                break;
            }
            sums[k - 1] += sums[k];
            counts[k - 1] += counts[k];
            sums.pop();
            counts.pop();
        }
    }
    let mut out = Vec::with_capacity(s.len());
    for (sum, count) in sums.iter().zip(&counts) {
        let mean = sum / *count as f64;
        out.extend(std::iter::repeat_n(mean, *count));
    }
    out
}

/// Euclidean projection onto the permutahedron of `(dim, ..., 1)`, or onto
/// its signed variant.
///
/// Unsigned: sort `y` descending, fit a nonincreasing sequence to
/// `sorted - (dim, ..., 1)` and subtract it, then undo the sort.
///
/// Signed: the set is `{x : |x| weakly submajorized by (dim, ..., 1)}`. The
/// projection keeps the signs of `y` and projects `|y|`; the weak (rather than
/// exact) sum constraint makes the fitted sequence additionally nonnegative,
/// which is the clipped isotonic fit.
pub fn project_permutahedron(dim: usize, y: &[f64], signed: bool) -> Result<ProjectionResult> {
    if dim == 0 {
        return Err(Error::InvalidDomain("permutahedron dim must be at least 1".into()));
    }
    crate::error::check_dim(dim, y.len())?;
    check_finite(y, "projection input")?;

    let magnitudes: Vec<f64> = if signed {
        y.iter().map(|v| v.abs()).collect()
    } else {
        y.to_vec()
    };
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| magnitudes[j].total_cmp(&magnitudes[i]));
    let shifted: Vec<f64> = order
        .iter()
        .enumerate()
        .map(|(k, &j)| magnitudes[j] - (dim - k) as f64)
        .collect();
    let mut fit = isotonic_nonincreasing(&shifted);
    if signed {
        for v in fit.iter_mut() {
            *v = v.max(0.0);
        }
    }
    let mut x = vec![0.0; dim];
    for (k, &j) in order.iter().enumerate() {
        x[j] = magnitudes[j] - fit[k];
    }
    if signed {
        for (xi, yi) in x.iter_mut().zip(y) {
            if *yi < 0.0 {
                *xi = -*xi;
            }
        }
    }
    Ok(ProjectionResult::exact(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pav_examples() {
        assert_eq!(isotonic_nonincreasing(&[3.0, 2.0, 1.0]), vec![3.0, 2.0, 1.0]);
        assert_eq!(isotonic_nonincreasing(&[1.0, 3.0]), vec![2.0, 2.0]);
        assert_eq!(isotonic_nonincreasing(&[1.0, 2.0, 6.0, 0.0]), vec![3.0, 3.0, 3.0, 0.0]);
        assert!(isotonic_nonincreasing(&[]).is_empty());
    }

    #[test]
    fn unsigned_examples() {
        let r = project_permutahedron(3, &[3.0, 2.0, 1.0], false).unwrap();
        assert_eq!(r.point, vec![3.0, 2.0, 1.0]);
        let r = project_permutahedron(2, &[10.0, 0.0], false).unwrap();
        assert_eq!(r.point, vec![2.0, 1.0]);
        let r = project_permutahedron(3, &[0.0, 0.0, 0.0], false).unwrap();
        assert_eq!(r.point, vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn signed_examples() {
        // interior points are fixed
        let r = project_permutahedron(3, &[0.0, 0.5, -1.0], true).unwrap();
        assert_eq!(r.point, vec![0.0, 0.5, -1.0]);
        // (10, 0) lands on the edge x = 2 of the octagon
        let r = project_permutahedron(2, &[10.0, 0.0], true).unwrap();
        assert_eq!(r.point, vec![2.0, 0.0]);
        let r = project_permutahedron(2, &[-10.0, -10.0], true).unwrap();
        assert_eq!(r.point, vec![-1.5, -1.5]);
    }
}
