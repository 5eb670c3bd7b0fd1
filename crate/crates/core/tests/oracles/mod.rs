//! Reference computations for the integration tests. Each one avoids the
//! library's own algorithms: determinants by cofactor expansion, signatures
//! from floating-point eigenvalues, primitivity from maximal minors.

#![allow(dead_code)]

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use k3lat::{IntMatrix, Lattice};

pub type Mat = Vec<Vec<i128>>;

pub fn rows(m: &IntMatrix) -> Mat {
    m.to_rows()
        .into_iter()
        .map(|r| r.iter().map(|x| x.to_i128().expect("entry fits in i128")).collect())
        .collect()
}

pub fn gram(l: &Lattice) -> Mat {
    rows(l.gram())
}

/// Laplace expansion along the first remaining row, memoized on the set of
/// unused columns. Zero entries are skipped, so sparse block matrices stay
/// cheap even at rank 22.
pub fn det_cofactor(a: &Mat) -> i128 {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "square matrix");
    if n == 0 {
        return 1;
    }
    assert!(n <= 63);
    fn go(a: &Mat, row: usize, free: u64, memo: &mut HashMap<u64, i128>) -> i128 {
        if row == a.len() {
            return 1;
        }
        if let Some(&v) = memo.get(&free) {
            return v;
        }
        let mut total = 0i128;
        let mut idx = 0;
        for col in 0..a.len() {
            if free & (1 << col) == 0 {
                continue;
            }
            let x = a[row][col];
            if x != 0 {
                let sign = if idx % 2 == 0 { 1 } else { -1 };
                total += sign * x * go(a, row + 1, free & !(1 << col), memo);
            }
            idx += 1;
        }
        memo.insert(free, total);
        total
    }
    go(a, 0, (1u64 << n) - 1, &mut HashMap::new())
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn eigenvalues(a: &Mat) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[i][j] * m[i][j]).sum();
        if off < 1e-18 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}

/// `(positive, negative, zero)` eigenvalue counts.
pub fn signature(a: &Mat) -> (usize, usize, usize) {
    let ev = eigenvalues(a);
    let pos = ev.iter().filter(|&&x| x > 1e-7).count();
    let neg = ev.iter().filter(|&&x| x < -1e-7).count();
    (pos, neg, ev.len() - pos - neg)
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|r| (0..cols).map(|j| (0..inner).map(|k| r[k] * b[k][j]).sum()).collect())
        .collect()
}

/// `mᵀ · g · m`.
pub fn pullback(g: &Mat, m: &Mat) -> Mat {
    mul(&mul(&transpose(m), g), m)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if cur.len() == k {
        return f(cur);
    }
    for i in start..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        let stop = subsets(n, k, i + 1, cur, f);
        cur.pop();
        if stop {
            return true;
        }
    }
    false
}

/// gcd of all maximal minors of an `n × r` matrix (columns are the basis).
/// Stops as soon as the gcd reaches 1.
pub fn maximal_minor_gcd(m: &Mat) -> i128 {
    let n = m.len();
    let r = if n == 0 { 0 } else { m[0].len() };
    let mut g = 0i128;
    subsets(n, r, 0, &mut Vec::new(), &mut |rows| {
        let sub: Mat = rows.iter().map(|&i| m[i].clone()).collect();
        g = gcd(g, det_cofactor(&sub));
        g == 1
    });
    g
}

/// Squarefree part by trial division.
pub fn squarefree(mut x: i128) -> i128 {
    assert!(x != 0);
    let sign = x.signum();
    x = x.abs();
    let mut out = 1;
    let mut p = 2;
    while p * p <= x {
        let mut e = 0;
        while x % p == 0 {
            x /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    sign * out * x
}

pub fn is_square(x: i128) -> bool {
    x >= 0 && {
        let r = (x as f64).sqrt().round() as i128;
        (r - 1..=r + 1).any(|s| s >= 0 && s * s == x)
    }
}

pub fn prime_factors(x: i128) -> Vec<u64> {
    let mut x = x.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= x {
        if x % p == 0 {
            out.push(p as u64);
            while x % p == 0 {
                x /= p;
            }
        }
        p += 1;
    }
    if x > 1 {
        out.push(x as u64);
    }
    out
}

/// Local solubility of `z² = a x² + b y²` over Q_p by exhaustive search
/// for a primitive solution modulo `p^k`, after removing square factors.
/// `k = 6` at p = 2 and `k = 3` at odd p are enough for squarefree inputs.
pub fn hilbert_by_search(a: i64, b: i64, p: u64) -> i8 {
    let a = squarefree(a as i128);
    let b = squarefree(b as i128);
    let k = if p == 2 { 6 } else { 3 };
    let modulus = (p as i128).pow(k);
    let p = p as i128;
    let red = |x: i128| x.rem_euclid(modulus);
    // For each residue: some root, and some root prime to p.
    let mut roots = vec![(false, false); modulus as usize];
    for z in 0..modulus {
        let e = &mut roots[red(z * z) as usize];
        e.0 = true;
        e.1 |= z % p != 0;
    }
    for x in 0..modulus {
        for y in 0..modulus {
            let r = red(a * x * x + b * y * y) as usize;
            let primitive_xy = x % p != 0 || y % p != 0;
            if (primitive_xy && roots[r].0) || roots[r].1 {
                return 1;
            }
        }
    }
    -1
}

/// Real Hilbert symbol: −1 exactly when both entries are negative.
pub fn hilbert_real(a: i64, b: i64) -> i8 {
    if a < 0 && b < 0 {
        -1
    } else {
        1
    }
}

pub fn to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("fits in i128")
}

/// Undirected multigraph helpers for the curve configuration.
pub struct Graph {
    pub names: Vec<String>,
    pub selfs: Vec<i64>,
    pub adj: Vec<Vec<i64>>,
}

impl Graph {
    /// Reads `{"curves":[{"name","self"}], "edges":[[a,b,mult]]}` directly.
    pub fn from_json(v: &serde_json::Value) -> Self {
        let curves = v["curves"].as_array().unwrap();
        let names: Vec<String> = curves.iter().map(|c| c["name"].as_str().unwrap().to_string()).collect();
        let selfs = curves.iter().map(|c| c["self"].as_i64().unwrap()).collect();
        let idx = |s: &str| names.iter().position(|n| n == s).unwrap();
        let mut adj = vec![vec![0; names.len()]; names.len()];
        for e in v["edges"].as_array().unwrap() {
            let (a, b, m) = (idx(e[0].as_str().unwrap()), idx(e[1].as_str().unwrap()), e[2].as_i64().unwrap());
            adj[a][b] += m;
            adj[b][a] += m;
        }
        Graph { names, selfs, adj }
    }

    pub fn idx(&self, s: &str) -> usize {
        self.names.iter().position(|n| n == s).unwrap_or_else(|| panic!("no curve {s}"))
    }

    pub fn meet(&self, a: &str, b: &str) -> i64 {
        let (i, j) = (self.idx(a), self.idx(b));
        if i == j {
            self.selfs[i]
        } else {
            self.adj[i][j]
        }
    }

    pub fn dot(&self, d1: &[(String, i64)], d2: &[(String, i64)]) -> i64 {
        d1.iter().flat_map(|(a, x)| d2.iter().map(move |(b, y)| x * y * self.meet(a, b))).sum()
    }

    /// Affine type of a tree or cycle of (−2)-curves by shape: node count,
    /// degrees and arm lengths.
    pub fn affine_type(&self, support: &[String]) -> Option<String> {
        let ids: Vec<usize> = support.iter().map(|s| self.idx(s)).collect();
        let n = ids.len();
        let deg = |i: usize| ids.iter().filter(|&&j| j != i).map(|&j| self.adj[i][j]).sum::<i64>();
        let edges: i64 = ids.iter().map(|&i| deg(i)).sum::<i64>() / 2;
        if n == 2 && self.adj[ids[0]][ids[1]] == 2 {
            return Some("~A1".into());
        }
        if edges == n as i64 && ids.iter().all(|&i| deg(i) == 2) {
            return Some(format!("~A{}", n - 1));
        }
        if edges != n as i64 - 1 {
            return None;
        }
        let branch: Vec<usize> = ids.iter().copied().filter(|&i| deg(i) >= 3).collect();
        let arm = |from: usize, first: usize| {
            let (mut prev, mut cur, mut len) = (from, first, 1);
            loop {
                let next: Vec<usize> = ids.iter().copied().filter(|&j| j != prev && j != cur && self.adj[cur][j] > 0).collect();
                if next.len() != 1 || deg(cur) != 2 {
                    return len;
                }
                prev = cur;
                cur = next[0];
                len += 1;
            }
        };
        match branch.len() {
            1 if deg(branch[0]) == 3 => {
                let b = branch[0];
                let mut arms: Vec<usize> = ids.iter().copied().filter(|&j| j != b && self.adj[b][j] > 0).map(|j| arm(b, j)).collect();
                arms.sort();
                match arms[..] {
                    [2, 2, 2] => Some("~E6".into()),
                    [1, 3, 3] => Some("~E7".into()),
                    [1, 2, 5] => Some("~E8".into()),
                    _ => None,
                }
            }
            1 if deg(branch[0]) == 4 && n == 5 => Some("~D4".into()),
            2 if ids.iter().filter(|&&i| deg(i) == 1).count() == 4 => Some(format!("~D{}", n - 1)),
            _ => None,
        }
    }
}
