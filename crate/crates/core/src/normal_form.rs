//! Smith and Hermite normal forms of integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
use crate::matrix::IntMatrix;

/// `u · m · v = diag(divisors)` with `u`, `v` unimodular and each divisor
/// dividing the next.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithDecomposition {
    #[serde(with = "json::bigints")]
    pub divisors: Vec<BigInt>,
    #[serde(with = "json::int_matrix")]
    pub u: IntMatrix,
    #[serde(with = "json::int_matrix")]
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.divisors.iter().filter(|d| !d.is_zero()).count()
    }

    /// Nonzero divisors different from 1.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.divisors
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }

    /// The diagonal matrix with the shape of the decomposed matrix.
    pub fn diagonal(&self) -> IntMatrix {
        IntMatrix::from_fn(self.u.rows(), self.v.rows(), |i, j| {
            if i == j {
                self.divisors[i].clone()
            } else {
                BigInt::zero()
            }
        })
    }
}

/// Extended gcd: returns `(g, x, y)` with `a·x + b·y = g ≥ 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn add_row(a: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    for j in 0..a.cols() {
        let v = &a[(src, j)] * f;
        a[(dst, j)] += v;
    }
}

fn add_col(a: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    for i in 0..a.rows() {
        let v = &a[(i, src)] * f;
        a[(i, dst)] += v;
    }
}

/// Smith normal form with transforms. The identity `u·m·v = d` is
/// re-checked before returning.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                add_row(&mut a, i, t, &q);
                add_row(&mut u, i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                add_col(&mut a, j, t, &q);
                add_col(&mut v, j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !(&a[(i, j)] % &a[(t, t)]).is_zero())
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    add_row(&mut a, t, i, &one);
                    add_row(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            let minus = -BigInt::one();
            for j in 0..c {
                a[(t, j)] = -&a[(t, j)];
            }
            for j in 0..r {
                u[(t, j)] = &u[(t, j)] * &minus;
            }
        }
    }

    let divisors = (0..r.min(c)).map(|i| a[(i, i)].clone()).collect();
    let out = SmithDecomposition { divisors, u, v };
    assert_eq!(
        &(&out.u * m) * &out.v,
        out.diagonal(),
        "Smith normal form reconstruction failed"
    );
    out
}

/// Checks the decomposition claims against `m`: unimodular transforms,
/// diagonal product, divisibility chain.
pub fn verify_smith(m: &IntMatrix, s: &SmithDecomposition) -> Result<()> {
    let unit = |x: &IntMatrix| x.determinant().map(|d| d.abs().is_one()).unwrap_or(false);
    if !unit(&s.u) || !unit(&s.v) {
        return Err(Error::Verification("transform is not unimodular".into()));
    }
    if &(&s.u * m) * &s.v != s.diagonal() {
        return Err(Error::Verification("u·m·v is not the stated diagonal".into()));
    }
    for w in s.divisors.windows(2) {
        let ok = if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        };
        if !ok || w[0].is_negative() {
            return Err(Error::Verification("divisibility chain broken".into()));
        }
    }
    Ok(())
}

/// Column Hermite normal form: a canonical Z-basis (as columns) of the
/// column span of `m`. Pivot entries are positive and entries to the left
/// of a pivot, in the pivot row, are reduced into `[0, pivot)`.
pub fn column_hnf(m: &IntMatrix) -> IntMatrix {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut p = 0;
    for row in 0..r {
        if p == c {
            break;
        }
        for j in p + 1..c {
            if a[(row, j)].is_zero() {
                continue;
            }
            let x = a[(row, p)].clone();
            let y = a[(row, j)].clone();
            let (g, s, t) = ext_gcd(&x, &y);
            let (xg, yg) = (&x / &g, &y / &g);
            for i in 0..r {
                let cp = &a[(i, p)] * &s + &a[(i, j)] * &t;
                let cj = &a[(i, j)] * &xg - &a[(i, p)] * &yg;
                a[(i, p)] = cp;
                a[(i, j)] = cj;
            }
        }
        if a[(row, p)].is_zero() {
            continue;
        }
        if a[(row, p)].is_negative() {
            for i in 0..r {
                a[(i, p)] = -&a[(i, p)];
            }
        }
        for j in 0..p {
            let q = -a[(row, j)].div_floor(&a[(row, p)]);
            if !q.is_zero() {
                add_col(&mut a, j, p, &q);
            }
        }
        p += 1;
    }
    a.select_columns(&(0..p).collect::<Vec<_>>())
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    m.to_rational().inverse()?.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{int, int_matrix};

    #[test]
    fn diagonal_two_three() {
        let s = smith_normal_form(&int_matrix(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.divisors, vec![int(1), int(6)]);
        verify_smith(&int_matrix(&[&[2, 0], &[0, 3]]), &s).unwrap();
    }

    #[test]
    fn identity_and_zero() {
        let s = smith_normal_form(&IntMatrix::identity(4));
        assert_eq!(s.divisors, vec![int(1); 4]);
        let z = smith_normal_form(&int_matrix(&[&[0]]));
        assert_eq!(z.divisors, vec![int(0)]);
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn rectangular() {
        let m = int_matrix(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.divisors, vec![int(2), int(6), int(12)]);
        let tall = int_matrix(&[&[1, 0], &[0, 2], &[0, 0]]);
        assert_eq!(smith_normal_form(&tall).divisors, vec![int(1), int(2)]);
    }

    #[test]
    fn hnf_is_canonical() {
        let a = int_matrix(&[&[2, 0], &[0, 3], &[4, 6]]);
        // same span, different generators
        let b = int_matrix(&[&[2, 2, 0], &[3, 0, 3], &[10, 4, 6]]);
        assert_eq!(column_hnf(&a), column_hnf(&b));
        assert_eq!(column_hnf(&a).cols(), 2);
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let m = int_matrix(&[&[2, 1], &[1, 1]]);
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(&m * &inv, IntMatrix::identity(2));
        assert!(unimodular_inverse(&int_matrix(&[&[2, 0], &[0, 1]])).is_none());
    }
}
