//! Small exact integer linear algebra (dimension at most 4).

/// Determinant by cofactor expansion; `m` is square.
pub(crate) fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// Rank of a set of integer row vectors (fraction-free elimination).
pub(crate) fn rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pivot);
        for i in r + 1..m.len() {
            if m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                let g = gcd(a, b);
                for k in 0..cols {
                    m[i][k] = m[i][k] * (a / g) - m[r][k] * (b / g);
                }
            }
        }
        r += 1;
    }
    r
}

pub(crate) fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A vector orthogonal to the `n - 1` rows of `m` (each of length `n`):
/// the generalized cross product, zero iff the rows are dependent.
pub(crate) fn cross(m: &[Vec<i128>], n: usize) -> Vec<i128> {
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * det(&minor)
        })
        .collect()
}

/// Affine dimension of a point set (`-1` for the empty set).
pub(crate) fn affine_dim(points: &[&Vec<i64>]) -> isize {
    let Some(first) = points.first() else {
        return -1;
    };
    let diffs: Vec<Vec<i128>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| (a - b) as i128).collect())
        .collect();
    rank(&diffs) as isize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants_and_ranks() {
        assert_eq!(det(&[vec![2, 0, 0], vec![0, 3, 0], vec![1, 1, 4]]), 24);
        assert_eq!(det(&[vec![1, 2], vec![2, 4]]), 0);
        assert_eq!(rank(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]), 2);
        assert_eq!(rank(&[vec![0, 0], vec![0, 0]]), 0);
        let c = cross(&[vec![1, 0, 0], vec![0, 1, 0]], 3);
        assert_eq!(c, vec![0, 0, 1]);
        assert_eq!(cross(&[], 1), vec![1]);
    }
}
