//! Integer lattices: kernels of integer matrices and Hermite normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IVec = Vec<BigInt>;

fn col_axpy(m: &mut [IVec], dst: usize, src: usize, f: &BigInt) {
    for row in m.iter_mut() {
        let v = &row[src] * f;
        row[dst] -= v;
    }
}

fn col_swap(m: &mut [IVec], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// A basis of `{x ∈ Zⁿ : A x = 0}` for `A` with `n` columns.
pub fn integer_kernel(a: &[IVec], n: usize) -> Vec<IVec> {
    let m = a.len();
    let mut work: Vec<IVec> = a.to_vec();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::one();
        work.push(e);
    }
    let mut k = 0;
    for r in 0..m {
        if k == n {
            break;
        }
        loop {
            let piv = (k..n)
                .filter(|&c| !work[r][c].is_zero())
                .min_by(|&x, &y| work[r][x].abs().cmp(&work[r][y].abs()));
            let Some(piv) = piv else { break };
            col_swap(&mut work, k, piv);
            let mut done = true;
            for c in k + 1..n {
                if !work[r][c].is_zero() {
                    let f = work[r][c].div_floor(&work[r][k]);
                    col_axpy(&mut work, c, k, &f);
                    if !work[r][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                k += 1;
                break;
            }
        }
    }
    (k..n).map(|c| (m..m + n).map(|r| work[r][c].clone()).collect()).collect()
}

/// Row Hermite normal form of the lattice spanned by `rows`: nonzero rows
/// only, positive pivots, entries above a pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(rows: &[IVec], n: usize) -> Vec<IVec> {
    let mut h: Vec<IVec> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut top = 0;
    for c in 0..n {
        if top == h.len() {
            break;
        }
        loop {
            let piv = (top..h.len())
                .filter(|&r| !h[r][c].is_zero())
                .min_by(|&x, &y| h[x][c].abs().cmp(&h[y][c].abs()));
            let Some(piv) = piv else { break };
            h.swap(top, piv);
            let mut done = true;
            for r in top + 1..h.len() {
                if !h[r][c].is_zero() {
                    let f = h[r][c].div_floor(&h[top][c]);
                    for j in 0..n {
                        let v = &h[top][j] * &f;
                        h[r][j] -= v;
                    }
                    if !h[r][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                if h[top][c].is_negative() {
                    for x in h[top].iter_mut() {
                        *x = -x.clone();
                    }
                }
                for r in 0..top {
                    let f = h[r][c].div_floor(&h[top][c]);
                    if !f.is_zero() {
                        for j in 0..n {
                            let v = &h[top][j] * &f;
                            h[r][j] -= v;
                        }
                    }
                }
                top += 1;
                break;
            }
        }
        h.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    h.retain(|r| r.iter().any(|x| !x.is_zero()));
    h
}

pub fn to_ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn mat_vec(a: &[IVec], x: &[BigInt]) -> IVec {
    a.iter()
        .map(|row| row.iter().zip(x).fold(BigInt::zero(), |s, (p, q)| s + p * q))
        .collect()
}
