//! Integer matrix elimination: column echelon forms with unimodular transforms,
//! saturated integer kernels, integer linear systems and the row Hermite normal
//! form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Result of column reduction `m * transform = echelon`.
pub struct ColumnEchelon {
    pub echelon: IntMatrix,
    /// Unimodular `cols × cols` matrix.
    pub transform: IntMatrix,
    /// `(row, col)` of every pivot; pivot columns are `0..rank`.
    pub pivots: Vec<(usize, usize)>,
    pub cols: usize,
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Replaces columns `(p, q)` of every row by `(x·p + y·q, u·p + v·q)`.
fn combine_columns(m: &mut IntMatrix, p: usize, q: usize, coef: [&BigInt; 4]) {
    let [x, y, u, v] = coef;
    for row in m.iter_mut() {
        let a = row[p].clone();
        let b = row[q].clone();
        row[p] = x * &a + y * &b;
        row[q] = u * &a + v * &b;
    }
}

pub fn column_echelon(m: &[Vec<BigInt>], cols: usize) -> ColumnEchelon {
    let mut h: IntMatrix = m.to_vec();
    let mut u = identity(cols);
    let mut pivots = Vec::new();
    let mut pc = 0;
    for r in 0..h.len() {
        if pc == cols {
            break;
        }
        for j in pc + 1..cols {
            if h[r][j].is_zero() {
                continue;
            }
            let a = h[r][pc].clone();
            let b = h[r][j].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let nb = -(&b / &g);
            let ag = &a / &g;
            combine_columns(&mut h, pc, j, [&x, &y, &nb, &ag]);
            combine_columns(&mut u, pc, j, [&x, &y, &nb, &ag]);
        }
        if !h[r][pc].is_zero() {
            pivots.push((r, pc));
            pc += 1;
        }
    }
    ColumnEchelon { echelon: h, transform: u, pivots, cols }
}

/// Basis (as column vectors) of the integer kernel `{c ∈ Z^cols : m c = 0}`.
/// The kernel lattice of an integer matrix is always saturated.
pub fn integer_kernel(m: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let ce = column_echelon(m, cols);
    let rank = ce.pivots.len();
    (rank..cols)
        .map(|j| ce.transform.iter().map(|row| row[j].clone()).collect())
        .collect()
}

impl ColumnEchelon {
    /// One integer solution of `m c = y`, if any exists.
    pub fn solve(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let rank = self.pivots.len();
        let mut sol = vec![BigInt::zero(); rank];
        let mut next = 0;
        for (r, row) in self.echelon.iter().enumerate() {
            let known: BigInt = (0..next).map(|j| &row[j] * &sol[j]).sum();
            let rest = &y[r] - known;
            if next < rank && self.pivots[next].0 == r {
                let piv = &row[next];
                let (q, rem) = rest.div_rem(piv);
                if !rem.is_zero() {
                    return None;
                }
                sol[next] = q;
                next += 1;
            } else if !rest.is_zero() {
                return None;
            }
        }
        Some(
            self.transform
                .iter()
                .map(|trow| trow[..rank].iter().zip(&sol).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }
}

/// Row-style Hermite normal form of the lattice generated by `rows`: upper
/// echelon, positive pivots, entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped, so the result is the canonical basis.
pub fn row_hnf(rows: &[Vec<BigInt>]) -> IntMatrix {
    let mut a: IntMatrix = rows.to_vec();
    let n = a.len();
    let d = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..d {
        if r == n {
            break;
        }
        for i in r + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let x0 = a[r][c].clone();
            let y0 = a[i][c].clone();
            let eg = x0.extended_gcd(&y0);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let nb = -(&y0 / &g);
            let ag = &x0 / &g;
            for k in 0..d {
                let p = a[r][k].clone();
                let q = a[i][k].clone();
                a[r][k] = &x * &p + &y * &q;
                a[i][k] = &nb * &p + &ag * &q;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for v in a[r].iter_mut() {
                *v = -v.clone();
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if q.is_zero() {
                continue;
            }
            for k in 0..d {
                let delta = &q * &a[r][k];
                a[i][k] -= delta;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}
