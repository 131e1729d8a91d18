//! Integer linear algebra built on the Smith and Hermite forms: kernels,
//! spans, exact solving over Z and over Z/n.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;

/// Row-style Hermite normal form of the row span of `a`.
///
/// Returns only the nonzero rows: each has a positive pivot strictly to the
/// right of the previous row's pivot, and entries above a pivot lie in
/// `[0, pivot)`. Two matrices span the same row lattice iff their HNFs agree.
pub fn hermite_normal_form(a: &IntMatrix) -> IntMatrix {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let best = (r..m)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&x, &y| h[(x, c)].abs().cmp(&h[(y, c)].abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &-q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
        }
        let p = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&p);
            h.add_row_multiple(i, r, &-q);
        }
        r += 1;
    }
    h.select_rows(0..r)
}

/// Basis (as columns) of the integer kernel `{x ∈ Zⁿ : A x = 0}`.
/// The kernel of an integer matrix is always saturated.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(a);
    s.v.select_columns(s.rank()..a.cols())
}

/// Basis (as columns) of the Z-span of the columns of `a`.
pub fn column_span_basis(a: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(a);
    let cols: Vec<Vec<BigInt>> = (0..s.rank())
        .map(|i| {
            let d = &s.d[(i, i)];
            s.u_inv.column(i).into_iter().map(|x| x * d).collect()
        })
        .collect();
    IntMatrix::from_columns(a.rows(), &cols).expect("shape fixed by construction")
}

/// One integer solution of `A x = b`, or `None`.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    if b.len() != a.rows() {
        return None;
    }
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b).ok()?;
    let mut z = vec![BigInt::zero(); a.cols()];
    for (i, c) in ub.iter().enumerate() {
        if i < s.rank() {
            let (q, r) = c.div_rem(&s.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        } else if !c.is_zero() {
            return None;
        }
    }
    s.v.mul_vec(&z).ok()
}

/// One solution of `A x ≡ b (mod n)` with entries reduced into `[0, n)`.
pub fn solve_mod(a: &IntMatrix, b: &[BigInt], n: &BigInt) -> Option<Vec<BigInt>> {
    assert!(n.is_positive(), "modulus must be positive");
    if b.len() != a.rows() {
        return None;
    }
    // A x + n z = b over the integers
    let stacked = a
        .hstack(&IntMatrix::identity(a.rows()).scale(n))
        .expect("row counts agree");
    let sol = solve_integer(&stacked, b)?;
    Some(sol[..a.cols()].iter().map(|x| x.mod_floor(n)).collect())
}

/// Basis (as columns) of the full-rank lattice `{x ∈ Zᵏ : A x ≡ 0 (mod n)}`.
pub fn kernel_mod(a: &IntMatrix, n: &BigInt) -> IntMatrix {
    assert!(n.is_positive(), "modulus must be positive");
    let k = a.cols();
    let stacked = a
        .hstack(&IntMatrix::identity(a.rows()).scale(n))
        .expect("row counts agree");
    // projection onto the first k coordinates is injective on this kernel
    integer_kernel(&stacked).select_rows(0..k)
}

/// Canonical representative of `y` modulo a full-rank lattice.
///
/// With `basis` in Hermite form (rows, pivot of row i in column i) the result
/// has every coordinate in `[0, pivotᵢ)`, which makes it the lexicographically
/// smallest nonnegative element of the coset `y + L`.
pub fn reduce_mod_lattice(y: &[BigInt], lattice_rows: &IntMatrix) -> Vec<BigInt> {
    let h = hermite_normal_form(lattice_rows);
    assert_eq!(h.rows(), y.len(), "lattice must have full rank");
    let mut y = y.to_vec();
    for i in 0..h.rows() {
        let q = y[i].div_floor(&h[(i, i)]);
        if q.is_zero() {
            continue;
        }
        for (yj, hj) in y.iter_mut().zip(h.row(i)) {
            *yj -= &q * hj;
        }
    }
    y
}

pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive(xs: &[BigInt]) -> bool {
    gcd_all(xs).is_one()
}
