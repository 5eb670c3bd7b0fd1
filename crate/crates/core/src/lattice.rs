//! Integral lattices given by symmetric Gram matrices, the standard
//! constructors (U, E8, ⟨n⟩, twists, direct sums) and exact invariants.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::json;
use crate::matrix::{int, IntMatrix, Matrix, RatMatrix};

/// Cartan matrix of E8 with the Bourbaki node ordering: the chain
/// 1-3-4-5-6-7-8 with node 2 attached to node 4.
pub const E8_CARTAN: [[i64; 8]; 8] = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
];

/// A free Z-module with a symmetric integral bilinear form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    name: String,
    gram: IntMatrix,
}

/// Sylvester inertia of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub s_plus: usize,
    pub s_minus: usize,
    pub s_zero: usize,
}

impl Signature {
    pub fn new(s_plus: usize, s_minus: usize, s_zero: usize) -> Self {
        Signature {
            s_plus,
            s_minus,
            s_zero,
        }
    }

    pub fn rank(&self) -> usize {
        self.s_plus + self.s_minus + self.s_zero
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.s_plus, self.s_minus, self.s_zero)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("name", &self.name)
            .field("gram", &self.gram)
            .finish()
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Lattice {
    /// Validates symmetry of `gram`.
    pub fn new(name: impl Into<String>, gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::Dimension(format!(
                "gram matrix is {}×{}",
                gram.rows(),
                gram.cols()
            )));
        }
        if let Some((row, col)) = gram.is_symmetric() {
            return Err(Error::NotSymmetric { row, col });
        }
        Ok(Lattice {
            name: name.into(),
            gram,
        })
    }

    pub fn from_rows(name: impl Into<String>, rows: &[&[i64]]) -> Result<Self> {
        let gram = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())?;
        Self::new(name, gram)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn zero() -> Self {
        Lattice {
            name: "0".into(),
            gram: Matrix::empty(0, 0),
        }
    }

    /// Inner product of two coordinate vectors.
    pub fn dot(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let n = self.rank();
        let mut acc = BigInt::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !y[j].is_zero() {
                    acc += &x[i] * &self.gram[(i, j)] * &y[j];
                }
            }
        }
        acc
    }

    pub fn norm(&self, x: &[BigInt]) -> BigInt {
        self.dot(x, x)
    }

    /// Exact determinant of the Gram matrix.
    pub fn determinant(&self) -> BigInt {
        self.gram.determinant().expect("gram is square")
    }

    pub fn is_degenerate(&self) -> bool {
        self.determinant().is_zero()
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    pub fn signature(&self) -> Signature {
        let diag = congruence_diagonal(&self.gram);
        Signature {
            s_plus: diag.iter().filter(|d| d.is_positive()).count(),
            s_minus: diag.iter().filter(|d| d.is_negative()).count(),
            s_zero: diag.iter().filter(|d| d.is_zero()).count(),
        }
    }

    /// Even iff every diagonal entry is even.
    pub fn is_even(&self) -> bool {
        let two = int(2);
        (0..self.rank()).all(|i| (&self.gram[(i, i)] % &two).is_zero())
    }

    /// The same module with the form multiplied by `m`.
    pub fn twist(&self, m: i64) -> Result<Self> {
        self.twist_big(&int(m))
    }

    pub fn twist_big(&self, m: &BigInt) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::InvalidArgument("twist by 0 is degenerate".into()));
        }
        if m.is_one() {
            return Ok(self.clone());
        }
        let name = if self.name.contains('+') {
            format!("({})({m})", self.name)
        } else {
            format!("{}({m})", self.name)
        };
        Ok(Lattice {
            name,
            gram: self.gram.map(|x| x * m),
        })
    }

    /// Orthogonal direct sum; the rank-0 lattice is the identity.
    pub fn direct_sum(&self, other: &Lattice) -> Self {
        if other.rank() == 0 {
            return self.clone();
        }
        if self.rank() == 0 {
            return other.clone();
        }
        Lattice {
            name: format!("{}+{}", self.name, other.name),
            gram: self.gram.block_diag(&other.gram),
        }
    }

    pub fn power(&self, copies: usize) -> Self {
        let mut out = Lattice::zero();
        for _ in 0..copies {
            out = out.direct_sum(self);
        }
        if copies > 1 {
            let base = if self.name.contains('+') {
                format!("({})", self.name)
            } else {
                self.name.clone()
            };
            out.name = format!("{base}^{copies}");
        }
        out
    }

    /// Sublattice cut out by a set of basis vectors (columns of `basis`).
    pub fn pullback(&self, name: impl Into<String>, basis: &IntMatrix) -> Result<Self> {
        if basis.rows() != self.rank() {
            return Err(Error::Dimension(format!(
                "basis has {} rows for a rank-{} lattice",
                basis.rows(),
                self.rank()
            )));
        }
        Lattice::new(name, basis.congruence(&self.gram))
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "name": self.name,
            "gram": json::int_matrix::to_value(&self.gram),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let name = v
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json("lattice needs a string \"name\"".into()))?;
        let gram = v
            .get("gram")
            .ok_or_else(|| Error::Json("lattice needs a \"gram\" array".into()))?;
        let gram = json::int_matrix::from_value(gram, 0).map_err(Error::Json)?;
        Lattice::new(name, gram)
    }
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Lattice::from_json(&v).map_err(serde::de::Error::custom)
    }
}

pub fn hyperbolic() -> Lattice {
    Lattice::from_rows("U", &[&[0, 1], &[1, 0]]).unwrap()
}

/// E8 for `sign = 1`, E8(−1) for `sign = −1`.
pub fn e8(sign: i64) -> Result<Lattice> {
    let name = match sign {
        1 => "E8",
        -1 => "E8(-1)",
        _ => return Err(Error::InvalidArgument(format!("E8 sign must be ±1, got {sign}"))),
    };
    let gram = Matrix::from_fn(8, 8, |i, j| int(sign * E8_CARTAN[i][j]));
    Lattice::new(name, gram)
}

pub fn rank1(n: i64) -> Lattice {
    rank1_big(&int(n))
}

pub fn rank1_big(n: &BigInt) -> Lattice {
    Lattice {
        name: format!("<{n}>"),
        gram: Matrix::from_fn(1, 1, |_, _| n.clone()),
    }
}

/// U³, the second cohomology lattice of a complex torus.
pub fn torus_lattice() -> Lattice {
    hyperbolic().power(3).with_name("U3")
}

/// Λ = U³ ⊕ E8(−1)², basis ordered U, U, U, E8(−1), E8(−1).
pub fn k3_lattice() -> Lattice {
    let e = e8(-1).unwrap();
    torus_lattice().direct_sum(&e).direct_sum(&e).with_name("Lambda")
}

fn require_positive(args: &[(&str, i64)]) -> Result<()> {
    for (label, v) in args {
        if *v < 1 {
            return Err(Error::InvalidArgument(format!("{label} must be ≥ 1, got {v}")));
        }
    }
    Ok(())
}

/// T(k,m,n) = U(k) ⊕ U(m) ⊕ ⟨−2n⟩ in the basis a₁, b₁, a₂, b₂, c.
pub fn twisted_t(k: i64, m: i64, n: i64) -> Result<Lattice> {
    require_positive(&[("k", k), ("m", m), ("n", n)])?;
    let u = hyperbolic();
    let l = u
        .twist(k)?
        .direct_sum(&u.twist(m)?)
        .direct_sum(&rank1(-2 * n));
    Ok(l.with_name(format!("T({k},{m},{n})")))
}

/// U² ⊕ ⟨−2n⟩.
pub fn u2_plus(n: i64) -> Result<Lattice> {
    require_positive(&[("n", n)])?;
    Ok(hyperbolic().power(2).direct_sum(&rank1(-2 * n)))
}

/// Symmetric congruence diagonalization over Q. Returns the diagonal
/// (zeros included for radical directions).
pub fn congruence_diagonal(gram: &IntMatrix) -> Vec<BigRational> {
    diagonalize_with_basis(gram).0
}

/// Diagonalization together with the basis change `p` such that
/// `pᵀ · gram · p` is diagonal.
pub fn diagonalize_with_basis(gram: &IntMatrix) -> (Vec<BigRational>, RatMatrix) {
    let n = gram.rows();
    let mut a = gram.to_rational();
    let mut p = RatMatrix::identity(n);

    let swap = |a: &mut RatMatrix, p: &mut RatMatrix, i: usize, j: usize| {
        a.swap_rows(i, j);
        a.swap_cols(i, j);
        p.swap_cols(i, j);
    };
    // e_i ← e_i + c·e_j applied as a congruence
    let add = |a: &mut RatMatrix, p: &mut RatMatrix, i: usize, j: usize, c: &BigRational| {
        for k in 0..n {
            let v = &a[(j, k)] * c;
            a[(i, k)] = &a[(i, k)] + v;
        }
        for k in 0..n {
            let v = &a[(k, j)] * c;
            a[(k, i)] = &a[(k, i)] + v;
        }
        for k in 0..n {
            let v = &p[(k, j)] * c;
            p[(k, i)] = &p[(k, i)] + v;
        }
    };

    let one = BigRational::one();
    for i in 0..n {
        if a[(i, i)].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                swap(&mut a, &mut p, i, j);
            } else {
                let pair = (i..n)
                    .flat_map(|r| (r + 1..n).map(move |c| (r, c)))
                    .find(|&(r, c)| !a[(r, c)].is_zero());
                let Some((r, c)) = pair else {
                    break;
                };
                swap(&mut a, &mut p, i, r);
                let c = if c == i { r } else { c };
                add(&mut a, &mut p, i, c, &one);
            }
        }
        let pivot = a[(i, i)].clone();
        for j in i + 1..n {
            if a[(j, i)].is_zero() {
                continue;
            }
            let f = -(&a[(j, i)] / &pivot);
            add(&mut a, &mut p, j, i, &f);
        }
    }
    ((0..n).map(|i| a[(i, i)].clone()).collect(), p)
}
