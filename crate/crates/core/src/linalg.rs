//! Exact integer linear algebra on small matrices.
//!
//! Everything is fraction-free (Bareiss) over `i128` with checked arithmetic;
//! the ray systems handled here have tiny entries, so overflow indicates a bug
//! and panics loudly instead of wrapping.

use num_integer::Integer;

fn mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow in exact linear algebra")
}

fn sub(a: i128, b: i128) -> i128 {
    a.checked_sub(b).expect("integer overflow in exact linear algebra")
}

/// Fraction-free row reduction in place; returns the rank.
fn bareiss(m: &mut [Vec<i128>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = 1i128;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                m[i][j] = sub(mul(m[r][c], m[i][j]), mul(m[i][c], m[r][j])) / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        r += 1;
    }
    r
}

/// Rank of a list of integer vectors.
pub fn rank(vectors: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = vectors.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    bareiss(&mut m)
}

/// Determinant of a square matrix.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a[i][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                a[i][j] = sub(mul(a[c][c], a[i][j]), mul(a[i][c], a[c][j])) / prev;
            }
            a[i][c] = 0;
        }
        prev = a[c][c];
    }
    sign * a[n - 1][n - 1]
}

/// Coordinates with respect to a linearly independent family of vectors.
///
/// `coords(x)` returns numerators `a` with `x = sum_i (a_i / den) * rays_i`,
/// where `den > 0`, or `None` if `x` is outside the span.
#[derive(Clone, Debug)]
pub struct Frame {
    rays: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    others: Vec<usize>,
    /// Signed adjugate of the pivot block, rows indexed by ray.
    adj: Vec<Vec<i128>>,
    den: i128,
}

impl Frame {
    /// Returns `None` when the rays are linearly dependent.
    pub fn new(rays: &[Vec<i64>]) -> Option<Frame> {
        let d = rays.len();
        let n = rays.first().map_or(0, |r| r.len());
        let mut pivots = Vec::with_capacity(d);
        let mut chosen: Vec<Vec<i64>> = Vec::with_capacity(d);
        for row in 0..n {
            if pivots.len() == d {
                break;
            }
            let candidate: Vec<i64> = rays.iter().map(|r| r[row]).collect();
            chosen.push(candidate);
            if rank(&chosen) == chosen.len() {
                pivots.push(row);
            } else {
                chosen.pop();
            }
        }
        if pivots.len() < d {
            return None;
        }
        let block: Vec<Vec<i128>> = pivots.iter().map(|&p| rays.iter().map(|r| r[p] as i128).collect()).collect();
        let det_b = det(&block);
        debug_assert!(det_b != 0);
        let sgn = det_b.signum();
        // adj[i][j] = (-1)^(i+j) * minor(block without row j, col i)
        let mut adj = vec![vec![0i128; d]; d];
        for (i, adj_row) in adj.iter_mut().enumerate() {
            for (j, slot) in adj_row.iter_mut().enumerate() {
                let minor: Vec<Vec<i128>> = (0..d)
                    .filter(|&r| r != j)
                    .map(|r| (0..d).filter(|&c| c != i).map(|c| block[r][c]).collect())
                    .collect();
                let cof = det(&minor);
                *slot = if (i + j) % 2 == 0 { cof } else { -cof } * sgn;
            }
        }
        let others = (0..n).filter(|r| !pivots.contains(r)).collect();
        Some(Frame { rays: rays.to_vec(), pivots, others, adj, den: det_b.abs() })
    }

    pub fn dim(&self) -> usize {
        self.rays.len()
    }

    /// Positive common denominator of all coordinates (the pivot-block determinant).
    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinate numerators computed from the pivot entries only.
    pub fn raw_coords(&self, x: &[i64]) -> Vec<i128> {
        self.adj
            .iter()
            .map(|row| row.iter().zip(&self.pivots).fold(0i128, |acc, (&a, &p)| acc + mul(a, x[p] as i128)))
            .collect()
    }

    /// Span defect on the non-pivot rows; zero iff `x` lies in the span.
    pub fn residual(&self, x: &[i64], raw: &[i128]) -> Vec<i128> {
        self.others
            .iter()
            .map(|&row| {
                let combo = self.rays.iter().zip(raw).fold(0i128, |acc, (r, &a)| acc + mul(r[row] as i128, a));
                sub(mul(self.den, x[row] as i128), combo)
            })
            .collect()
    }

    pub fn coords(&self, x: &[i64]) -> Option<Vec<i128>> {
        let raw = self.raw_coords(x);
        if self.residual(x, &raw).iter().all(|&r| r == 0) {
            Some(raw)
        } else {
            None
        }
    }
}

/// Gcd of all maximal minors of the matrix whose columns are `rays`.
///
/// Equals 1 exactly when the rays generate the full lattice of their span.
pub fn maximal_minor_gcd(rays: &[Vec<i64>]) -> i128 {
    let d = rays.len();
    if d == 0 {
        return 1;
    }
    let n = rays[0].len();
    let mut g = 0i128;
    let mut rows: Vec<usize> = (0..d).collect();
    if d > n {
        return 0;
    }
    loop {
        let block: Vec<Vec<i128>> = rows.iter().map(|&p| rays.iter().map(|r| r[p] as i128).collect()).collect();
        g = g.gcd(&det(&block));
        if g == 1 {
            return 1;
        }
        // next combination of rows
        let mut i = d;
        loop {
            if i == 0 {
                return g;
            }
            i -= 1;
            if rows[i] < n - d + i {
                rows[i] += 1;
                for j in i + 1..d {
                    rows[j] = rows[j - 1] + 1;
                }
                break;
            }
        }
    }
}
